#include "hamvar/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include <boost/math/tools/toms748_solve.hpp>

#include "hamvar/errors.hpp"
#include "hamvar/optimize.hpp"

namespace hamvar {

namespace {

using SobolevKey = std::tuple<double, double, int, int, double, double, int, int, std::uint64_t>;

double cached_sobolev(const RectDomain& dom, double m, const Exponents& exps,
                      const SobolevOptions& so) {
    static std::mutex mtx;
    static std::map<SobolevKey, double> cache;
    const SobolevKey key{dom.a, dom.b, dom.nx, dom.ny, m, exps.q,
                         so.random_starts, so.iterations, so.seed};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double value = sobolev_constant_estimate(dom, m, exps, so).value;
    cache.emplace(key, value);
    return value;
}

// Discrete principal eigenvector: the sampled sine is exact for the stencil.
Field sine_mode(const RectDomain& dom) {
    return sample(dom, [&](double x, double y) {
        return std::sin(std::numbers::pi * x / dom.a) * std::sin(std::numbers::pi * y / dom.b);
    });
}

DescentPoint make_point(const ReducedEnergy& re, const ReducedEnergy::State& st, double tol) {
    const RectDomain& dom = re.domain();
    const double cell = dom.cell();
    DescentPoint pt;
    pt.x = st.theta;
    pt.value = st.value;
    pt.scale = std::abs(st.convex) + std::abs(st.potential);
    pt.grad = re.theta_gradient(st);
    pt.grad *= cell;
    pt.precond = re.preconditioner(st);
    pt.precond *= 1.0 / cell;
    pt.measure = l2_norm(re.w_gradient(st), dom);
    const double fnorm = l2_norm(st.f, dom);
    pt.target = tol * std::min(std::max(1.0, std::abs(st.value)), std::max(fnorm, 1e-300));
    return pt;
}

void clip_undershoot(Field& f) {
    const double thr = 1e-12 * std::max(max_abs(f), 1e-300);
    for (double& v : f.values) {
        if (v < 0.0 && v > -thr) v = 0.0;
    }
}

SolveResult finish(const ReducedEnergy& re, const ReducedEnergy::State& st, SolutionKind kind,
                   int iterations, const Potential& residual_pot) {
    const RectDomain& dom = re.domain();
    SolveResult res;
    res.kind = kind;
    res.v = st.w;
    res.u = st.psi;
    res.u *= -1.0;
    clip_undershoot(res.v);
    clip_undershoot(res.u);
    res.energy = st.value;
    res.grad_norm = l2_norm(re.w_gradient(st), dom);
    res.residuals = residual_with(res.u, res.v, re.mu(), re.exps(), residual_pot, dom);
    res.iterations = iterations;
    res.w_norm = w_norm_of_laplacian(st.theta, re.exps(), dom);
    return res;
}

SolveResult trivial_result(const RectDomain& dom, SolutionKind kind) {
    SolveResult res;
    res.kind = kind;
    res.v = Field(dom);
    res.u = Field(dom);
    return res;
}

DescentOptions descent_options(const SolverOptions& opt) {
    DescentOptions d;
    d.memory = opt.memory;
    d.max_iter = opt.max_iter;
    return d;
}

[[noreturn]] void throw_nonconvergence(const char* who, const DescentResult& r) {
    std::ostringstream os;
    os << who << ": stopped after " << r.iterations << " iterations with gradient "
       << r.point.measure << " > target " << r.point.target;
    throw NonConvergence(os.str());
}

// Field on the segment between two path nodes.
Field lerp(const Field& a, const Field& b, double t) {
    Field out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += t * (b[k] - a[k]);
    return out;
}

}  // namespace

std::string to_string(SolutionKind k) {
    switch (k) {
    case SolutionKind::BallMin: return "BallMin";
    case SolutionKind::MountainPass: return "MountainPass";
    case SolutionKind::Truncated: return "Truncated";
    case SolutionKind::Sublinear: return "Sublinear";
    }
    return "?";
}

std::string to_string(Evidence e) {
    switch (e) {
    case Evidence::TwoSolutions: return "TwoSolutions";
    case Evidence::OneSolution: return "OneSolution";
    case Evidence::NotDetected: return "NotDetected";
    }
    return "?";
}

BallGeometry ball_geometry(const SystemParams& params, const RectDomain& dom,
                           const GeometryOptions& opt) {
    params.require_valid();
    dom.require_valid();
    if (!(opt.eta > 0.0 && opt.eta < 1.0)) throw InvalidExponents("eta must lie in (0,1)");
    const Exponents& e = params.exps;
    const double p = e.p, q = e.q, r = e.r, s = e.s;
    const double beta = (q + 1.0) / q;

    BallGeometry g;
    g.eta = opt.eta;
    g.S_qr = cached_sobolev(dom, r, e, opt.sobolev);
    g.S_qp = cached_sobolev(dom, p, e, opt.sobolev);
    g.c1 = q / (q + 1.0) * (params.mu > 0.0 ? growth_constants(e).C_hat : 1.0);
    g.c2 = g.S_qr / (r + 1.0);
    g.c3 = g.S_qp / (p + 1.0);
    g.R0 = opt.R0_override > 0.0
               ? opt.R0_override
               : std::pow(g.c1 * (q + 1.0) / (q * g.c3 * (p + 1.0)), q / (q * p - 1.0));
    g.r0 = g.eta * g.R0;
    g.delta0 = (q * p - 1.0) / (3.0 * q * (p + 1.0));
    g.c0 = g.delta0 * g.c1 * std::pow(g.r0, beta);
    const double eb = std::pow(g.eta, beta);
    g.mu0 = std::pow(g.delta0, s) * std::pow(g.R0, (q - s) / q) * std::pow(g.eta, s * beta) /
            std::pow(1.0 - g.delta0 * eb, s);
    g.lambda0 = g.delta0 * (g.c1 / g.c2) * eb * std::pow(g.R0, 1.0 / q - r);
    return g;
}

SolveResult minimize_in_ball(const SystemParams& params, const RectDomain& dom,
                             const BallGeometry& geom, const SolverOptions& opt) {
    params.require_valid();
    dom.require_valid();
    if (params.lambda == 0.0) return trivial_result(dom, SolutionKind::BallMin);
    const Exponents& e = params.exps;
    const ReducedEnergy re(dom, params.mu, e, Potential::full(params.lambda));
    const double R0 = geom.R0;

    const Field dphi = laplacian(sine_mode(dom), dom);
    const double nphi = w_norm_of_laplacian(dphi, e, dom);
    const double sigma = e.q / (1.0 - e.q * e.r) + 0.5;
    double t = std::min(std::pow(params.lambda, sigma), 0.5 * R0) / nphi;
    Field theta0 = t * dphi;
    // shrink until the seed has negative energy and is a discrete
    // sub-solution, so descent starts below the minimal solution
    auto acceptable = [&](const ReducedEnergy::State& st) {
        if (!(st.value < 0.0)) return false;
        const Field g = re.w_gradient(st);
        return *std::max_element(g.values.begin(), g.values.end()) <= 0.0;
    };
    ReducedEnergy::State st = re.evaluate(theta0);
    for (int h = 0; !acceptable(st) && h < 400; ++h) {
        theta0 *= 0.5;
        st = re.evaluate(theta0);
    }
    if (!acceptable(st)) {
        throw NonConvergence("minimize_in_ball: no negative-energy sub-solution seed along phi1");
    }

    bool last_on_boundary = false;
    int boundary_run = 0;
    const Evaluator eval = [&](Field th) {
        const double n = w_norm_of_laplacian(th, e, dom);
        last_on_boundary = n > R0;
        if (last_on_boundary) th *= R0 / n;
        return make_point(re, re.evaluate(th), opt.tol);
    };
    const StepHook hook = [&](const DescentPoint&, int it) {
        boundary_run = last_on_boundary ? boundary_run + 1 : 0;
        if (boundary_run >= opt.boundary_patience) {
            throw BoundaryStall("minimize_in_ball: iterate pinned to the sphere R0 = " +
                                std::to_string(R0) + " at iteration " + std::to_string(it));
        }
    };
    const DescentResult dr = lbfgs_minimize(eval, theta0, descent_options(opt), hook);
    if (!dr.converged) throw_nonconvergence("minimize_in_ball", dr);
    return finish(re, re.evaluate(dr.point.x), SolutionKind::BallMin, dr.iterations,
                  Potential::full(params.lambda));
}

SolveResult mountain_pass(const SystemParams& params, const RectDomain& dom,
                          const SolveResult& w_min, const SolverOptions& opt) {
    params.require_valid();
    dom.require_valid();
    require_match(w_min.v, dom, "mountain_pass");
    if (opt.path_nodes < 3) throw InvalidExponents("mountain_pass needs at least 3 path nodes");
    const Exponents& e = params.exps;
    const ReducedEnergy re(dom, params.mu, e, Potential::full(params.lambda));

    const Field theta_min = laplacian(w_min.v, dom);
    const double J_min = re.evaluate(theta_min).value;
    const double floor_gap = 1e-12 * std::max(1.0, std::abs(J_min));

    // far endpoint t̃ φ₁ below J_min − 1
    const Field dphi = laplacian(sine_mode(dom), dom);
    const double nphi = w_norm_of_laplacian(dphi, e, dom);
    double t_far = std::max(1.0, 2.0 * w_norm_of_laplacian(theta_min, e, dom)) / nphi;
    Field theta_far = t_far * dphi;
    double E_far = re.evaluate(theta_far).value;
    for (int k = 0; !(E_far < J_min - 1.0) && k < 200; ++k) {
        t_far *= 2.0;
        theta_far = t_far * dphi;
        E_far = re.evaluate(theta_far).value;
    }
    if (!(E_far < J_min - 1.0)) throw NonConvergence("mountain_pass: no far endpoint found");

    // string deformation
    const int P = opt.path_nodes;
    std::vector<Field> path(P);
    std::vector<double> E(P);
    for (int i = 0; i < P; ++i) {
        path[i] = lerp(theta_min, theta_far, static_cast<double>(i) / (P - 1));
        E[i] = i == 0 ? J_min : (i == P - 1 ? E_far : re.evaluate(path[i]).value);
    }
    auto argmax = [&] {
        return static_cast<int>(std::max_element(E.begin() + 1, E.end() - 1) - E.begin());
    };
    int sweeps = 0;
    double prev_max = E[argmax()];
    for (; sweeps < opt.path_sweeps; ++sweeps) {
        const int im = argmax();
        if (E[im] <= J_min + floor_gap) {
            throw Collapse("mountain_pass: path maximum fell to the level of the local minimum");
        }
        const ReducedEnergy::State st = re.evaluate(path[im]);
        const Field grad = re.theta_gradient(st);
        const Field D = re.preconditioner(st);
        Field dir(dom);
        for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = -D[k] * grad[k];
        const Field tau = path[im + 1] - path[im - 1];
        const double tt = dot(tau, tau);
        if (tt > 0.0) {
            const double c = dot(dir, tau) / tt;
            for (std::size_t k = 0; k < dir.size(); ++k) dir[k] -= c * tau[k];
        }
        const double slope = dom.cell() * dot(grad, dir);
        if (!(slope < 0.0)) break;
        double alpha = 1.0;
        const double xm = max_abs(path[im]);
        const double dm = max_abs(dir);
        if (dm > 0.5 * xm) alpha = 0.5 * xm / dm;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
            Field trial = path[im];
            for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += alpha * dir[k];
            const double Et = re.evaluate(trial).value;
            if (Et <= E[im] + 1e-4 * alpha * slope) {
                path[im] = std::move(trial);
                E[im] = Et;
                moved = true;
                break;
            }
        }
        if (!moved) break;

        // equal arc length in the W-norm
        std::vector<double> arc(P, 0.0);
        for (int i = 1; i < P; ++i) {
            arc[i] = arc[i - 1] + w_norm_of_laplacian(path[i] - path[i - 1], e, dom);
        }
        std::vector<Field> fresh(P);
        fresh[0] = path[0];
        fresh[P - 1] = path[P - 1];
        int seg = 0;
        for (int j = 1; j < P - 1; ++j) {
            const double target = arc[P - 1] * j / (P - 1);
            while (seg < P - 2 && arc[seg + 1] < target) ++seg;
            const double len = arc[seg + 1] - arc[seg];
            const double t = len > 0.0 ? (target - arc[seg]) / len : 0.0;
            fresh[j] = lerp(path[seg], path[seg + 1], std::clamp(t, 0.0, 1.0));
        }
        path = std::move(fresh);
        for (int i = 1; i < P - 1; ++i) E[i] = re.evaluate(path[i]).value;

        const double cur_max = E[argmax()];
        if (sweeps >= 5 && prev_max - cur_max < 1e-4 * std::max(1.0, std::abs(cur_max))) {
            ++sweeps;
            break;
        }
        prev_max = cur_max;
    }
    const int im = argmax();
    if (E[im] <= J_min + floor_gap) {
        throw Collapse("mountain_pass: path maximum fell to the level of the local minimum");
    }

    // local minimax: minimize Φ(d) = max_t E(θ_min + t d) over directions,
    // taking the first local maximum on each ray leaving the local minimum
    const Field w_base = re.poisson().solve(theta_min);
    auto ray_max = [&](const Field& d) {
        const Field wd = re.poisson().solve(d);
        auto slope = [&](double t) { return re.along_ray(theta_min, w_base, d, wd, t).slope; };
        double lo = 1.0;
        double hi = 1.0;
        double f_lo = slope(1.0);
        double f_hi = f_lo;
        if (f_lo > 0.0) {
            while (f_hi > 0.0) {
                lo = hi;
                f_lo = f_hi;
                hi *= 1.25;
                if (hi > 1e8) throw NonConvergence("mountain_pass: energy unbounded along ray");
                f_hi = slope(hi);
            }
        } else {
            while (!(f_lo > 0.0)) {
                hi = lo;
                f_hi = f_lo;
                lo *= 0.8;
                if (lo < 1e-6) {
                    throw Collapse("mountain_pass: ray from the local minimum has no maximum");
                }
                f_lo = slope(lo);
            }
        }
        if (f_hi == 0.0) return hi;
        std::uintmax_t iters = 200;
        const auto bracket = boost::math::tools::toms748_solve(
            slope, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iters);
        return 0.5 * (bracket.first + bracket.second);
    };
    bool first_eval = true;
    const Evaluator eval = [&](Field d) {
        try {
            d *= ray_max(d);
        } catch (const Collapse&) {
            // a trial direction that misses the mountain is rejected, not fatal
            if (first_eval) throw;
            DescentPoint reject;
            reject.value = std::numeric_limits<double>::infinity();
            return reject;
        }
        first_eval = false;
        DescentPoint pt = make_point(re, re.evaluate(theta_min + d), opt.tol);
        pt.x = std::move(d);
        return pt;
    };
    DescentOptions dopt = descent_options(opt);
    dopt.max_rel_step = 0.5;
    const DescentResult dr = lbfgs_minimize(eval, path[im] - theta_min, dopt);
    if (!dr.converged) throw_nonconvergence("mountain_pass", dr);
    const ReducedEnergy::State st = re.evaluate(theta_min + dr.point.x);
    if (st.value <= J_min + floor_gap) {
        throw Collapse("mountain_pass: critical level does not exceed the local minimum");
    }
    return finish(re, st, SolutionKind::MountainPass, sweeps + dr.iterations,
                  Potential::full(params.lambda));
}

SolveResult solve_sublinear(const RectDomain& dom, const Exponents& exps,
                            const SolverOptions& opt) {
    exps.require_positive();
    dom.require_valid();
    if (!(exps.q * exps.r < 1.0)) throw InvalidExponents("sublinear problem requires qr < 1");
    const Potential pot = Potential::sublinear();
    const ReducedEnergy re(dom, 0.0, exps, pot);
    const Field dphi = laplacian(sine_mode(dom), dom);
    Field theta0 = (1.0 / w_norm_of_laplacian(dphi, exps, dom)) * dphi;
    ReducedEnergy::State st = re.evaluate(theta0);
    for (int h = 0; !(st.value < 0.0) && h < 200; ++h) {
        theta0 *= 0.5;
        st = re.evaluate(theta0);
    }
    if (!(st.value < 0.0)) throw NonConvergence("solve_sublinear: no negative-energy seed");
    const Evaluator eval = [&](Field th) { return make_point(re, re.evaluate(th), opt.tol); };
    const DescentResult dr = lbfgs_minimize(eval, theta0, descent_options(opt));
    if (!dr.converged) throw_nonconvergence("solve_sublinear", dr);
    return finish(re, re.evaluate(dr.point.x), SolutionKind::Sublinear, dr.iterations, pot);
}

std::pair<Field, Field> subsolution_pair(double lambda_under, const SolveResult& omega,
                                         const Exponents& exps) {
    if (!(exps.q * exps.r < 1.0)) throw InvalidExponents("subsolution scaling requires qr < 1");
    if (!(lambda_under >= 0.0)) throw InvalidExponents("lambda_under must be non-negative");
    const double a = 1.0 / (1.0 - exps.q * exps.r);
    return {std::pow(lambda_under, a) * omega.u, std::pow(lambda_under, exps.q * a) * omega.v};
}

SolveResult minimize_truncated(const SystemParams& params, const RectDomain& dom,
                               const Field& v_under, const Field& v_over,
                               const SolverOptions& opt) {
    params.require_valid();
    dom.require_valid();
    require_match(v_under, dom, "minimize_truncated");
    require_match(v_over, dom, "minimize_truncated");
    for (std::size_t k = 0; k < v_under.size(); ++k) {
        if (!(v_under[k] < v_over[k])) {
            throw OrderViolation("minimize_truncated: barriers not strictly ordered at node " +
                                 std::to_string(k));
        }
    }
    const ReducedEnergy re(dom, params.mu, params.exps,
                           Potential::truncated(params.lambda, v_under, v_over));
    const Evaluator eval = [&](Field th) { return make_point(re, re.evaluate(th), opt.tol); };
    const DescentResult dr = lbfgs_minimize(eval, laplacian(v_under, dom), descent_options(opt));
    if (!dr.converged) throw_nonconvergence("minimize_truncated", dr);
    const ReducedEnergy::State st = re.evaluate(dr.point.x);
    SolveResult res = finish(re, st, SolutionKind::Truncated, dr.iterations,
                             Potential::full(params.lambda));
    res.energy = energy(res.v, params, dom).value;
    return res;
}

double truncated_energy(const Field& w, const SystemParams& params, const Field& v_under,
                        const Field& v_over, const RectDomain& dom) {
    require_match(w, dom, "truncated_energy");
    const ReducedEnergy re(dom, params.mu, params.exps,
                           Potential::truncated(params.lambda, v_under, v_over));
    const Field theta = laplacian(w, dom);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        acc += eval_Psi(params.mu, theta[k], params.exps) -
               re.potential().F(k, w[k], params.exps);
    }
    return acc * dom.cell();
}

double truncation_offset(const SystemParams& params, const Field& v_under,
                         const RectDomain& dom) {
    require_match(v_under, dom, "truncation_offset");
    const Exponents& e = params.exps;
    double acc = 0.0;
    for (double lo : v_under.values) {
        if (lo <= 0.0) continue;
        acc += params.lambda * e.r / (e.r + 1.0) * std::pow(lo, e.r + 1.0) +
               e.p / (e.p + 1.0) * std::pow(lo, e.p + 1.0);
    }
    return -acc * dom.cell();
}

ProbeReport probe_detail(double lambda, double mu, const Exponents& exps, const RectDomain& dom,
                         const SolverOptions& opt) {
    const SystemParams params{lambda, mu, exps};
    BallGeometry geom = ball_geometry(params, dom);
    ProbeReport rep;
    std::optional<SolveResult> wmin;
    for (int attempt = 0; attempt <= 3 && !wmin; ++attempt) {
        rep.R0_used = geom.R0;
        try {
            wmin = minimize_in_ball(params, dom, geom, opt);
        } catch (const BoundaryStall&) {
            geom.R0 *= 2.0;
            rep.note = "boundary stall";
        } catch (const Error& err) {
            rep.note = err.what();
            break;
        }
    }
    if (!wmin) return rep;
    auto ok = [&](const SolveResult& r) {
        return r.residuals.r1 <= opt.tol && r.residuals.r2 <= opt.tol;
    };
    if (lambda > 0.0) {
        if (!(wmin->energy < 0.0 && ok(*wmin))) {
            rep.note = "ball minimum not accepted";
            return rep;
        }
        rep.nontrivial = 1;
    }
    try {
        const SolveResult mp = mountain_pass(params, dom, *wmin, opt);
        if (ok(mp) && mp.energy > wmin->energy) ++rep.nontrivial;
    } catch (const Error& err) {
        rep.note = err.what();
    }
    rep.evidence = rep.nontrivial >= 2   ? Evidence::TwoSolutions
                   : rep.nontrivial == 1 ? Evidence::OneSolution
                                         : Evidence::NotDetected;
    return rep;
}

Evidence solvability_probe(double lambda, double mu, const Exponents& exps,
                           const RectDomain& dom, const SolverOptions& opt) {
    return probe_detail(lambda, mu, exps, dom, opt).evidence;
}

BifurcationCurve trace_lambda_star(const std::vector<double>& mu_samples, const Exponents& exps,
                                   const RectDomain& dom, const TraceOptions& opt) {
    if (!std::is_sorted(mu_samples.begin(), mu_samples.end())) {
        throw ConfigError("mu_samples must be sorted ascending");
    }
    for (double mu : mu_samples) {
        if (!std::isfinite(mu) || mu < 0.0) throw ConfigError("mu samples must be finite and >= 0");
    }
    if (!(opt.resolution > 0.0) || !(opt.lambda_base > 0.0) || opt.max_probes < 2) {
        throw ConfigError("invalid trace options");
    }
    exps.require_valid();
    dom.require_valid();
    const double lambda1 = principal_eigenvalue(dom).lambda1;
    // fill the embedding-constant cache before the workers start
    (void)ball_geometry(SystemParams{0.0, 0.0, exps}, dom);

    const double log_ratio = std::log1p(opt.resolution);
    auto lattice = [&](long k) { return opt.lambda_base * std::exp(k * log_ratio); };
    const bool convex_at_infinity = exps.p > 1.0 && exps.q > 1.0;

    auto trace_one = [&](double mu) {
        CurvePoint pt;
        pt.mu = mu;
        const bool bounded = mu > 0.0 && convex_at_infinity;
        if (bounded) pt.lambda_ub = nonexistence_bound(mu, exps, lambda1);
        auto probe = [&](long k) {
            ++pt.probes;
            return solvability_probe(lattice(k), mu, exps, dom, opt.solver);
        };
        long lo = 0;
        Evidence ev_lo = probe(0);
        if (ev_lo == Evidence::NotDetected) {
            pt.lambda_star = 0.0;
            pt.lambda_fail = lattice(0);
            return pt;
        }
        long hi = 0;
        bool hi_probed = false;
        if (bounded) {
            hi = std::max(1L, static_cast<long>(std::ceil(std::log(pt.lambda_ub / opt.lambda_base) /
                                                          log_ratio)));
        } else {
            const long step = static_cast<long>(std::ceil(std::log(10.0) / log_ratio));
            hi = lo + step;
            for (;;) {
                if (pt.probes >= opt.max_probes) {
                    pt.lambda_star = lattice(lo);
                    pt.evidence = ev_lo;
                    return pt;
                }
                const Evidence ev = probe(hi);
                if (ev == Evidence::NotDetected) break;
                lo = hi;
                ev_lo = ev;
                hi += step;
            }
            hi_probed = true;
        }
        while (hi - lo > 1 && pt.probes < opt.max_probes) {
            const long mid = lo + (hi - lo) / 2;
            const Evidence ev = probe(mid);
            if (ev != Evidence::NotDetected) {
                lo = mid;
                ev_lo = ev;
            } else {
                hi = mid;
                hi_probed = true;
            }
        }
        pt.lambda_star = lattice(lo);
        pt.evidence = ev_lo;
        pt.lambda_fail = hi_probed ? lattice(hi) : pt.lambda_ub;
        return pt;
    };

    BifurcationCurve curve;
    curve.resolution = opt.resolution;
    curve.points.resize(mu_samples.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < mu_samples.size(); i = next++) {
            try {
                curve.points[i] = trace_one(mu_samples[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const int jobs = std::clamp(opt.jobs, 1, static_cast<int>(std::max<std::size_t>(1, mu_samples.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return curve;
}

}  // namespace hamvar
