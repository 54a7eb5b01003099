#pragma once

// JSON and CSV serialization. Floats go out with 17 significant digits so a
// reload reproduces the doubles bit for bit.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hamvar/grid.hpp"
#include "hamvar/solvers.hpp"
#include "hamvar/verify.hpp"

namespace hamvar {

using json = nlohmann::ordered_json;

[[nodiscard]] std::string format_double(double x);
/// Inverse of format_double (accepts "inf", "-inf", "nan").
[[nodiscard]] double parse_double(const std::string& s);

/// JSON number, or the strings "inf"/"-inf"/"nan" for non-finite values.
[[nodiscard]] json number(double x);

[[nodiscard]] json to_json(const Exponents& e);
[[nodiscard]] json to_json(const RectDomain& dom);
[[nodiscard]] json to_json(const BallGeometry& g);
[[nodiscard]] json to_json(const ResidualReport& r);
/// Scalars of a SolveResult; the fields are written separately as CSV.
[[nodiscard]] json to_json(const SolveResult& r, const Exponents& exps, const RectDomain& dom);
[[nodiscard]] json to_json(const BifurcationCurve& c);
[[nodiscard]] json to_json(const PropertyReport& r);

/// CSV with header x,y,value over the interior nodes.
void write_field_csv(const std::filesystem::path& path, const Field& f, const RectDomain& dom);
/// Reads a CSV written by write_field_csv; throws DimensionMismatch on a size mismatch.
[[nodiscard]] Field read_field_csv(const std::filesystem::path& path, const RectDomain& dom);
/// {"a","b","nx","ny"} header describing a field file.
void write_field_header(const std::filesystem::path& path, const RectDomain& dom);

/// CSV columns mu,lambda_star,lambda_ub,evidence.
void write_curve_csv(const std::filesystem::path& path, const BifurcationCurve& c);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace hamvar
