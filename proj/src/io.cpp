#include "hamvar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hamvar/errors.hpp"

namespace hamvar {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("not a number: '" + s + "'");
    }
    return x;
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

json to_json(const Exponents& e) {
    return json{{"p", e.p}, {"q", e.q}, {"r", e.r}, {"s", e.s}};
}

json to_json(const RectDomain& dom) {
    return json{{"a", dom.a}, {"b", dom.b}, {"nx", dom.nx}, {"ny", dom.ny}};
}

json to_json(const BallGeometry& g) {
    return json{{"R0", g.R0},         {"r0", g.r0},     {"c0", g.c0},   {"mu0", g.mu0},
                {"lambda0", g.lambda0}, {"delta0", g.delta0}, {"c1", g.c1}, {"c2", g.c2},
                {"c3", g.c3},         {"eta", g.eta},   {"S_qr", g.S_qr}, {"S_qp", g.S_qp}};
}

json to_json(const ResidualReport& r) { return json{{"r1", r.r1}, {"r2", r.r2}}; }

json to_json(const SolveResult& r, const Exponents& exps, const RectDomain& dom) {
    double umin = std::numeric_limits<double>::infinity();
    double vmin = umin;
    for (std::size_t k = 0; k < r.v.size(); ++k) {
        umin = std::min(umin, r.u[k]);
        vmin = std::min(vmin, r.v[k]);
    }
    return json{{"kind", to_string(r.kind)},
                {"energy", r.energy},
                {"w_norm", r.w_norm},
                {"grad_norm", r.grad_norm},
                {"residuals", to_json(r.residuals)},
                {"iterations", r.iterations},
                {"min_u", number(umin)},
                {"min_v", number(vmin)},
                {"v_hash", format_double(static_cast<double>(field_hash(r.v)))},
                {"exponents", to_json(exps)},
                {"domain", to_json(dom)}};
}

json to_json(const BifurcationCurve& c) {
    json pts = json::array();
    for (const CurvePoint& p : c.points) {
        pts.push_back(json{{"mu", p.mu},
                           {"lambda_star", p.lambda_star},
                           {"lambda_ub", number(p.lambda_ub)},
                           {"lambda_fail", number(p.lambda_fail)},
                           {"evidence", to_string(p.evidence)},
                           {"probes", p.probes}});
    }
    return json{{"resolution", c.resolution}, {"points", pts}};
}

json to_json(const PropertyReport& r) {
    json details = json::object();
    for (const auto& [k, v] : r.details) details[k] = number(v);
    return json{{"property_id", r.property_id},
                {"samples", r.samples},
                {"violations", r.violations},
                {"worst_margin", number(r.worst_margin)},
                {"empirical_constant", number(r.empirical_constant)},
                {"passed", r.passed()},
                {"records", r.records},
                {"details", details}};
}

void write_field_csv(const std::filesystem::path& path, const Field& f, const RectDomain& dom) {
    require_match(f, dom, "write_field_csv");
    std::ofstream out = open_out(path);
    out << "x,y,value\n";
    for (int j = 0; j < dom.ny; ++j) {
        for (int i = 0; i < dom.nx; ++i) {
            out << format_double(dom.x(i)) << ',' << format_double(dom.y(j)) << ','
                << format_double(f.at(i, j)) << '\n';
        }
    }
}

Field read_field_csv(const std::filesystem::path& path, const RectDomain& dom) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "x,y,value") throw ConfigError(path.string() + ": unexpected header '" + line + "'");
    Field f(dom);
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c2 = line.rfind(',');
        if (c2 == std::string::npos) throw ConfigError(path.string() + ": malformed row");
        if (k >= f.size()) throw DimensionMismatch(path.string() + ": too many rows");
        f[k++] = parse_double(line.substr(c2 + 1));
    }
    if (k != f.size()) throw DimensionMismatch(path.string() + ": too few rows");
    return f;
}

void write_field_header(const std::filesystem::path& path, const RectDomain& dom) {
    write_json(path, to_json(dom));
}

void write_curve_csv(const std::filesystem::path& path, const BifurcationCurve& c) {
    std::ofstream out = open_out(path);
    out << "mu,lambda_star,lambda_ub,evidence\n";
    for (const CurvePoint& p : c.points) {
        out << format_double(p.mu) << ',' << format_double(p.lambda_star) << ','
            << format_double(p.lambda_ub) << ',' << to_string(p.evidence) << '\n';
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace hamvar
