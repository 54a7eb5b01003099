#pragma once

// Configuration and drivers behind the hamvar executable. Every command takes
// a RunConfig built from an optional flat JSON file overridden by flags, and
// returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hamvar/io.hpp"
#include "hamvar/nonlinearity.hpp"

namespace hamvar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;

struct RunConfig {
    Exponents exps;
    double lambda = 0.05;
    double mu = 0.05;
    double a = 1.0;
    double b = 1.0;
    int nx = 63;
    int ny = 63;
    double tol = 1e-6;
    int max_iter = 5000;
    int path_nodes = 31;
    std::uint64_t seed = 12345;
    double eta = 0.1;
    /// Ball radius; 0 means computed from the embedding estimates.
    double R0 = 0.0;
    std::string out_dir = "hamvar_out";
    // sweep
    std::vector<double> mu_samples = {0.0, 0.2, 0.4, 0.8};
    double resolution = 1e-2;
    int max_probes = 20;
    int jobs = 1;
    // verify
    std::size_t sample_count = 100000;
    std::size_t geometry_fields = 200;
    // psi
    std::vector<double> thetas = {-8.0, -1.0, 0.0, 1.0, 8.0};

    [[nodiscard]] RectDomain domain() const { return {a, b, nx, ny}; }
    /// Checks shared by every command; throws ConfigError/InvalidExponents/DimensionMismatch.
    void validate() const;
    /// Additionally requires the two-solution hypotheses, in particular qp > 1.
    void validate_for_solve() const;
};

/// Reads flat keys into `base`; unknown keys and wrong types throw ConfigError.
[[nodiscard]] RunConfig config_from_json(const json& j, RunConfig base = {});
[[nodiscard]] RunConfig load_config(const std::string& path, RunConfig base = {});
[[nodiscard]] json to_json(const RunConfig& c);

int cmd_solve(const RunConfig& c, std::ostream& out);
int cmd_sweep(const RunConfig& c, std::ostream& out);
int cmd_verify(const RunConfig& c, std::ostream& out);
int cmd_eigen(const RunConfig& c, std::ostream& out);
int cmd_psi(const RunConfig& c, std::ostream& out);

/// Parses argv, dispatches, and maps exceptions to exit codes:
/// 0 success, 1 configuration/validation, 2 solver failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hamvar
