#include "hamvar/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>

#include "hamvar/energy.hpp"
#include "hamvar/errors.hpp"
#include "hamvar/grid.hpp"
#include "hamvar/solvers.hpp"
#include "hamvar/verify.hpp"

namespace hamvar {

namespace {

template <typename T>
T get_as(const json& v, const std::string& key) {
    try {
        if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError("");
            if constexpr (std::is_unsigned_v<T>) {
                if (v.get<long long>() < 0) throw ConfigError("");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError("");
        }
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type: " + v.dump());
    }
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

template <typename T>
Setter set(T RunConfig::*member) {
    return [member](RunConfig& c, const json& v, const std::string& k) {
        c.*member = get_as<T>(v, k);
    };
}

template <typename T>
Setter set_exp(T Exponents::*member) {
    return [member](RunConfig& c, const json& v, const std::string& k) {
        c.exps.*member = get_as<T>(v, k);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"p", set_exp(&Exponents::p)},
        {"q", set_exp(&Exponents::q)},
        {"r", set_exp(&Exponents::r)},
        {"s", set_exp(&Exponents::s)},
        {"lambda", set(&RunConfig::lambda)},
        {"mu", set(&RunConfig::mu)},
        {"a", set(&RunConfig::a)},
        {"b", set(&RunConfig::b)},
        {"nx", set(&RunConfig::nx)},
        {"ny", set(&RunConfig::ny)},
        {"tol", set(&RunConfig::tol)},
        {"max_iter", set(&RunConfig::max_iter)},
        {"path_nodes", set(&RunConfig::path_nodes)},
        {"seed", set(&RunConfig::seed)},
        {"eta", set(&RunConfig::eta)},
        {"R0", set(&RunConfig::R0)},
        {"out_dir", set(&RunConfig::out_dir)},
        {"mu_samples", set(&RunConfig::mu_samples)},
        {"resolution", set(&RunConfig::resolution)},
        {"max_probes", set(&RunConfig::max_probes)},
        {"jobs", set(&RunConfig::jobs)},
        {"sample_count", set(&RunConfig::sample_count)},
        {"geometry_fields", set(&RunConfig::geometry_fields)},
        {"thetas", set(&RunConfig::thetas)},
    };
    return table;
}

SolverOptions solver_options(const RunConfig& c) {
    SolverOptions so;
    so.tol = c.tol;
    so.max_iter = c.max_iter;
    so.path_nodes = c.path_nodes;
    return so;
}

GeometryOptions geometry_options(const RunConfig& c) {
    GeometryOptions go;
    go.eta = c.eta;
    go.sobolev.seed = c.seed;
    go.R0_override = c.R0;
    return go;
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
    return std::filesystem::path(c.out_dir) / name;
}

std::string fmt(double x, int prec = 10) {
    std::ostringstream os;
    os << std::setprecision(prec) << x;
    return os.str();
}

void print_solution(std::ostream& out, const std::string& label, const SolveResult& r) {
    out << label << ": J = " << fmt(r.energy) << ", ||v||_W = " << fmt(r.w_norm)
        << ", residuals = (" << fmt(r.residuals.r1, 3) << ", " << fmt(r.residuals.r2, 3)
        << "), iterations = " << r.iterations << '\n';
}

void write_solution(const RunConfig& c, const std::string& stem, const SolveResult& r) {
    const RectDomain dom = c.domain();
    write_field_csv(out_path(c, stem + "_v.csv"), r.v, dom);
    write_field_csv(out_path(c, stem + "_u.csv"), r.u, dom);
}

}  // namespace

void RunConfig::validate() const {
    exps.require_positive();
    domain().require_valid();
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (path_nodes < 3) throw ConfigError("path_nodes must be at least 3");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
    if (!(R0 >= 0.0) || !std::isfinite(R0)) throw ConfigError("R0 must be finite and >= 0");
    if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
    if (max_probes < 1) throw ConfigError("max_probes must be at least 1");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
    if (!std::isfinite(lambda) || lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (!std::isfinite(mu) || mu < 0.0) throw ConfigError("mu must be >= 0");
}

void RunConfig::validate_for_solve() const {
    validate();
    if (!exps.superlinear()) {
        throw ConfigError("q*p = " + fmt(exps.q * exps.p) +
                          " but two solutions need q*p > 1; raise p or q");
    }
    exps.require_valid();
}

RunConfig config_from_json(const json& j, RunConfig base) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object with flat keys");
    for (const auto& [key, value] : j.items()) {
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(base, value, key);
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j, std::move(base));
}

json to_json(const RunConfig& c) {
    return json{{"p", c.exps.p},
                {"q", c.exps.q},
                {"r", c.exps.r},
                {"s", c.exps.s},
                {"lambda", c.lambda},
                {"mu", c.mu},
                {"a", c.a},
                {"b", c.b},
                {"nx", c.nx},
                {"ny", c.ny},
                {"tol", c.tol},
                {"max_iter", c.max_iter},
                {"path_nodes", c.path_nodes},
                {"seed", c.seed},
                {"eta", c.eta},
                {"R0", c.R0},
                {"out_dir", c.out_dir},
                {"mu_samples", c.mu_samples},
                {"resolution", c.resolution},
                {"max_probes", c.max_probes},
                {"jobs", c.jobs},
                {"sample_count", c.sample_count},
                {"geometry_fields", c.geometry_fields},
                {"thetas", c.thetas}};
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
    c.validate_for_solve();
    const RectDomain dom = c.domain();
    const SystemParams params{c.lambda, c.mu, c.exps};
    params.require_valid();
    const SolverOptions so = solver_options(c);

    const BallGeometry geom = ball_geometry(params, dom, geometry_options(c));
    out << "exponents " << c.exps.describe() << ", lambda = " << c.lambda << ", mu = " << c.mu
        << ", grid " << dom.nx << "x" << dom.ny << '\n';
    out << "ball radius R0 = " << fmt(geom.R0) << " (lambda0 = " << fmt(geom.lambda0)
        << ", mu0 = " << fmt(geom.mu0) << ")\n";

    const SolveResult wmin = minimize_in_ball(params, dom, geom, so);
    print_solution(out, "ball minimum  ", wmin);
    if (wmin.w_norm == 0.0) out << "  (trivial minimum m = 0)\n";
    const SolveResult wmp = mountain_pass(params, dom, wmin, so);
    print_solution(out, "mountain pass ", wmp);

    const double larger = std::max(wmin.w_norm, wmp.w_norm);
    const double separation = larger > 0.0 ? w_norm(wmp.v - wmin.v, c.exps, dom) / larger : 0.0;
    out << "relative W-distance = " << fmt(separation, 6) << '\n';

    json j{{"command", "solve"},
           {"config", to_json(c)},
           {"geometry", to_json(geom)},
           {"ball_min", to_json(wmin, c.exps, dom)},
           {"mountain_pass", to_json(wmp, c.exps, dom)},
           {"relative_w_distance", separation}};
    write_json(out_path(c, "solve.json"), j);
    write_field_header(out_path(c, "fields.json"), dom);
    write_solution(c, "ball_min", wmin);
    write_solution(c, "mountain_pass", wmp);
    out << "wrote " << c.out_dir << "/solve.json and field CSVs\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    if (c.mu_samples.empty()) throw ConfigError("mu_samples must not be empty");
    c.validate_for_solve();
    TraceOptions to;
    to.solver = solver_options(c);
    to.resolution = c.resolution;
    to.max_probes = c.max_probes;
    to.jobs = c.jobs;
    const BifurcationCurve curve = trace_lambda_star(c.mu_samples, c.exps, c.domain(), to);

    bool monotone = true;
    bool bounded = true;
    out << std::setw(10) << "mu" << std::setw(16) << "lambda_star" << std::setw(16) << "lambda_ub"
        << "  evidence\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const CurvePoint& p = curve.points[i];
        out << std::setw(10) << p.mu << std::setw(16) << fmt(p.lambda_star, 8) << std::setw(16)
            << (std::isfinite(p.lambda_ub) ? fmt(p.lambda_ub, 8) : "unavailable") << "  "
            << to_string(p.evidence) << '\n';
        if (i > 0 && p.lambda_star > curve.points[i - 1].lambda_star) monotone = false;
        if (p.lambda_star > p.lambda_ub) bounded = false;
    }
    out << "non-increasing in mu: " << (monotone ? "yes" : "no") << '\n';
    out << "all estimates within the analytic bound: " << (bounded ? "yes" : "no") << '\n';

    json j{{"command", "sweep"},
           {"config", to_json(c)},
           {"curve", to_json(curve)},
           {"non_increasing", monotone},
           {"within_bound", bounded}};
    write_json(out_path(c, "sweep.json"), j);
    write_curve_csv(out_path(c, "sweep.csv"), curve);
    out << "wrote " << c.out_dir << "/sweep.json and sweep.csv\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    c.validate();
    if (c.sample_count < 1) throw ConfigError("sample_count must be at least 1");
    std::vector<PropertyReport> reports =
        run_nonlinearity_suites(standard_exponent_sets(), c.sample_count, c.seed);

    // The geometry suite needs the two-solution hypotheses of the configured exponents.
    c.validate_for_solve();
    const RectDomain dom = c.domain();
    const BallGeometry geom =
        ball_geometry(SystemParams{0.0, c.mu, c.exps}, dom, geometry_options(c));
    EnergyGeometryOptions eo;
    eo.ladder_mu = c.mu;
    reports.push_back(check_energy_geometry(geom, c.exps, dom, c.geometry_fields, c.seed + 100, eo));

    bool all = true;
    json arr = json::array();
    for (const PropertyReport& r : reports) {
        all = all && r.passed();
        out << (r.passed() ? "PASS " : "FAIL ") << std::left << std::setw(36) << r.property_id
            << std::right << " samples=" << r.samples << " violations=" << r.violations
            << " worst_margin=" << fmt(r.worst_margin, 4);
        if (!std::isnan(r.empirical_constant)) out << " constant=" << fmt(r.empirical_constant, 6);
        out << '\n';
        for (const std::string& rec : r.records) out << "    " << rec << '\n';
        arr.push_back(to_json(r));
    }
    write_json(out_path(c, "verify.json"),
               json{{"command", "verify"}, {"config", to_json(c)}, {"passed", all}, {"reports", arr}});
    out << (all ? "all suites passed" : "some suites FAILED") << '\n';
    return all ? kExitOk : kExitSolver;
}

int cmd_eigen(const RunConfig& c, std::ostream& out) {
    c.validate();
    const double exact = std::numbers::pi * std::numbers::pi * (1.0 / (c.a * c.a) + 1.0 / (c.b * c.b));
    // three grids ending at the configured one, each with half the spacing of the previous
    std::vector<RectDomain> grids;
    RectDomain g = c.domain();
    for (int k = 0; k < 3; ++k) {
        grids.insert(grids.begin(), g);
        g.nx = (g.nx + 1) / 2 - 1;
        g.ny = (g.ny + 1) / 2 - 1;
    }
    for (const RectDomain& d : grids) d.require_valid();

    out << std::setw(8) << "nx" << std::setw(8) << "ny" << std::setw(22) << "lambda1_h"
        << std::setw(22) << "closed_form_fd" << std::setw(14) << "error" << std::setw(10)
        << "ratio\n";
    json rows = json::array();
    double prev_err = 0.0;
    for (const RectDomain& d : grids) {
        const EigenPair ep = principal_eigenvalue(d);
        const double fd = fd_principal_eigenvalue(d);
        const double err = std::abs(ep.lambda1 - exact);
        const double ratio = prev_err > 0.0 ? prev_err / err : std::nan("");
        out << std::setw(8) << d.nx << std::setw(8) << d.ny << std::setw(22) << fmt(ep.lambda1, 16)
            << std::setw(22) << fmt(fd, 16) << std::setw(14) << fmt(err, 4) << std::setw(10)
            << (std::isnan(ratio) ? std::string("-") : fmt(ratio, 4)) << '\n';
        rows.push_back(json{{"nx", d.nx},
                            {"ny", d.ny},
                            {"lambda1_h", ep.lambda1},
                            {"closed_form_fd", fd},
                            {"error", err},
                            {"ratio", number(ratio)},
                            {"iterations", ep.iterations}});
        prev_err = err;
    }
    out << "continuum value " << fmt(exact, 16) << '\n';
    write_json(out_path(c, "eigen.json"),
               json{{"command", "eigen"}, {"config", to_json(c)}, {"exact", exact}, {"rows", rows}});
    return kExitOk;
}

int cmd_psi(const RunConfig& c, std::ostream& out) {
    c.exps.require_positive();
    if (!std::isfinite(c.mu) || c.mu < 0.0) throw ConfigError("mu must be >= 0");
    if (c.exps.s >= c.exps.q && c.mu > 0.0) throw ConfigError("psi needs s < q when mu > 0");
    out << std::setw(24) << "theta" << std::setw(26) << "psi" << std::setw(26) << "Psi" << '\n';
    json rows = json::array();
    for (double th : c.thetas) {
        if (!std::isfinite(th)) throw ConfigError("theta values must be finite");
        const PsiPair pp = eval_psi_Psi(c.mu, th, c.exps);
        out << std::setw(24) << format_double(th) << std::setw(26) << format_double(pp.psi)
            << std::setw(26) << format_double(pp.Psi) << '\n';
        rows.push_back(json{{"theta", th}, {"psi", pp.psi}, {"Psi", pp.Psi}});
    }
    write_json(out_path(c, "psi.json"),
               json{{"command", "psi"}, {"config", to_json(c)}, {"rows", rows}});
    return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-solution solver and property checks for the concave-convex Hamiltonian system"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "flat JSON config; flags override its values");

    // Flags are collected into `flags`; appliers copy only those actually given.
    RunConfig flags;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> appliers;
    auto add = [&](const std::string& name, auto member, const std::string& desc) {
        CLI::Option* o = app.add_option(name, flags.*member, desc);
        appliers.emplace_back(o, [member, &flags](RunConfig& c) { c.*member = flags.*member; });
        return o;
    };
    auto add_exp = [&](const std::string& name, double Exponents::*member) {
        CLI::Option* o = app.add_option(name, flags.exps.*member, "exponent " + name.substr(2));
        appliers.emplace_back(o, [member, &flags](RunConfig& c) { c.exps.*member = flags.exps.*member; });
    };
    add_exp("--p", &Exponents::p);
    add_exp("--q", &Exponents::q);
    add_exp("--r", &Exponents::r);
    add_exp("--s", &Exponents::s);
    add("--lambda", &RunConfig::lambda, "parameter lambda >= 0");
    add("--mu", &RunConfig::mu, "parameter mu >= 0");
    add("--a", &RunConfig::a, "domain width");
    add("--b", &RunConfig::b, "domain height");
    add("--nx", &RunConfig::nx, "interior nodes in x");
    add("--ny", &RunConfig::ny, "interior nodes in y");
    int n_both = 0;
    CLI::Option* n_opt = app.add_option("--n", n_both, "interior nodes in both directions");
    add("--tol", &RunConfig::tol, "relative residual tolerance");
    add("--max-iter", &RunConfig::max_iter, "iteration cap per descent");
    add("--path-nodes", &RunConfig::path_nodes, "nodes of the mountain-pass path");
    add("--seed", &RunConfig::seed, "seed for sampling and random starts");
    add("--eta", &RunConfig::eta, "inner radius ratio r0/R0");
    add("--R0", &RunConfig::R0, "ball radius override (0 = computed)");
    add("--out", &RunConfig::out_dir, "output directory");
    add("--mu-samples", &RunConfig::mu_samples, "mu values for sweep")->expected(1, -1);
    add("--resolution", &RunConfig::resolution, "relative bisection resolution");
    add("--max-probes", &RunConfig::max_probes, "probe budget per mu");
    add("--jobs", &RunConfig::jobs, "worker threads for sweep (default $HAMVAR_JOBS or 1)");
    add("--samples", &RunConfig::sample_count, "samples per verification suite");
    add("--geometry-fields", &RunConfig::geometry_fields, "random fields for the geometry suite");
    add("--theta", &RunConfig::thetas, "theta values for psi")->expected(1, -1)->allow_extra_args();

    using Command = int (*)(const RunConfig&, std::ostream&);
    const std::vector<std::tuple<std::string, std::string, Command>> commands = {
        {"solve", "ball minimum and mountain-pass solution at (lambda, mu)", cmd_solve},
        {"sweep", "trace lambda*(mu) over mu_samples", cmd_sweep},
        {"verify", "run the sampling verification suites", cmd_verify},
        {"eigen", "principal eigenvalue and convergence table", cmd_eigen},
        {"psi", "table of psi and Psi at the given theta values", cmd_psi},
    };
    for (const auto& [name, desc, fn] : commands) app.add_subcommand(name, desc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        RunConfig cfg;
        if (const char* env = std::getenv("HAMVAR_JOBS"); env != nullptr && *env != '\0') {
            try {
                std::size_t pos = 0;
                cfg.jobs = std::stoi(env, &pos);
                if (env[pos] != '\0') throw std::invalid_argument(env);
            } catch (const std::exception&) {
                throw ConfigError(std::string("HAMVAR_JOBS is not an integer: ") + env);
            }
        }
        if (!config_path.empty()) cfg = load_config(config_path, cfg);
        for (const auto& [opt, apply] : appliers) {
            if (opt->count() > 0) apply(cfg);
        }
        if (n_opt->count() > 0) cfg.nx = cfg.ny = n_both;

        for (const auto& [name, desc, fn] : commands) {
            if (app.got_subcommand(name)) return fn(cfg, out);
        }
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidExponents& e) {
        err << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DimensionMismatch& e) {
        err << "invalid grid: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "output error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace hamvar
