#include "hamvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hamvar/errors.hpp"

namespace hamvar {

void RectDomain::require_valid() const {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DimensionMismatch("domain sides must be finite and positive");
    }
    if (nx < 3 || ny < 3) {
        throw DimensionMismatch("need at least 3 interior nodes per direction");
    }
    if (size() > kMaxGridNodes) {
        throw DimensionMismatch("grid has " + std::to_string(size()) +
                                " nodes, cap is " + std::to_string(kMaxGridNodes));
    }
}

bool Field::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& o) {
    if (o.size() != size()) throw DimensionMismatch("field sum: size mismatch");
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    if (o.size() != size()) throw DimensionMismatch("field difference: size mismatch");
    for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
    return *this;
}

Field& Field::operator*=(double t) {
    for (double& v : values) v *= t;
    return *this;
}

void require_match(const Field& w, const RectDomain& dom, const char* what) {
    if (!w.matches(dom)) {
        throw DimensionMismatch(std::string(what) + ": field is " + std::to_string(w.nx) + "x" +
                                std::to_string(w.ny) + ", domain is " + std::to_string(dom.nx) +
                                "x" + std::to_string(dom.ny));
    }
}

Field laplacian(const Field& w, const RectDomain& dom) {
    require_match(w, dom, "laplacian");
    const int nx = dom.nx;
    const int ny = dom.ny;
    const double ix2 = 1.0 / (dom.hx() * dom.hx());
    const double iy2 = 1.0 / (dom.hy() * dom.hy());
    Field out(dom);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double c = w.at(i, j);
            const double west = i > 0 ? w.at(i - 1, j) : 0.0;
            const double east = i + 1 < nx ? w.at(i + 1, j) : 0.0;
            const double south = j > 0 ? w.at(i, j - 1) : 0.0;
            const double north = j + 1 < ny ? w.at(i, j + 1) : 0.0;
            out.at(i, j) = (west - 2.0 * c + east) * ix2 + (south - 2.0 * c + north) * iy2;
        }
    }
    return out;
}

PoissonSolver::PoissonSolver(const RectDomain& dom) : dom_(dom) {
    dom_.require_valid();
    const int nx = dom.nx;
    const int ny = dom.ny;
    auto table = [](int n) {
        std::vector<double> t(static_cast<std::size_t>(n) * n);
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                t[static_cast<std::size_t>(k) * n + i] =
                    std::sin(std::numbers::pi * (k + 1) * (i + 1) / (n + 1));
            }
        }
        return t;
    };
    sx_ = table(nx);
    sy_ = table(ny);
    const double hx = dom.hx();
    const double hy = dom.hy();
    eig_.resize(dom.size());
    for (int l = 0; l < ny; ++l) {
        const double sl = std::sin(std::numbers::pi * (l + 1) / (2.0 * (ny + 1)));
        for (int k = 0; k < nx; ++k) {
            const double sk = std::sin(std::numbers::pi * (k + 1) / (2.0 * (nx + 1)));
            eig_[static_cast<std::size_t>(l) * nx + k] =
                4.0 / (hx * hx) * sk * sk + 4.0 / (hy * hy) * sl * sl;
        }
    }
}

void PoissonSolver::transform(std::span<const double> in, std::span<double> out) const {
    const int nx = dom_.nx;
    const int ny = dom_.ny;
    std::vector<double> tmp(dom_.size(), 0.0);
    // along x, row by row
    for (int j = 0; j < ny; ++j) {
        const double* row = in.data() + static_cast<std::size_t>(j) * nx;
        double* dst = tmp.data() + static_cast<std::size_t>(j) * nx;
        for (int k = 0; k < nx; ++k) {
            const double* sk = sx_.data() + static_cast<std::size_t>(k) * nx;
            double acc = 0.0;
            for (int i = 0; i < nx; ++i) acc += sk[i] * row[i];
            dst[k] = acc;
        }
    }
    // along y
    std::fill(out.begin(), out.end(), 0.0);
    for (int l = 0; l < ny; ++l) {
        double* dst = out.data() + static_cast<std::size_t>(l) * nx;
        for (int j = 0; j < ny; ++j) {
            const double c = sy_[static_cast<std::size_t>(l) * ny + j];
            const double* src = tmp.data() + static_cast<std::size_t>(j) * nx;
            for (int k = 0; k < nx; ++k) dst[k] += c * src[k];
        }
    }
}

Field PoissonSolver::solve(const Field& rhs) const {
    require_match(rhs, dom_, "PoissonSolver::solve");
    Field coef(dom_);
    transform(rhs.values, coef.values);
    const double norm = 4.0 / ((dom_.nx + 1.0) * (dom_.ny + 1.0));
    for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= -norm / eig_[k];
    Field out(dom_);
    transform(coef.values, out.values);
    return out;
}

double fd_principal_eigenvalue(const RectDomain& dom) {
    const double hx = dom.hx();
    const double hy = dom.hy();
    const double sx = std::sin(std::numbers::pi * hx / (2.0 * dom.a));
    const double sy = std::sin(std::numbers::pi * hy / (2.0 * dom.b));
    return 4.0 / (hx * hx) * sx * sx + 4.0 / (hy * hy) * sy * sy;
}

EigenPair principal_eigenvalue(const RectDomain& dom, double tol, int max_iter) {
    const PoissonSolver solver(dom);
    Field x(dom, 1.0);
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        Field y = solver.solve(x);
        y *= -1.0;  // y = (-Δ_h)^{-1} x
        const double yy = inner(y, y, dom);
        const double next = inner(y, x, dom) / yy;
        const double ymax = *std::max_element(y.values.begin(), y.values.end());
        y *= 1.0 / ymax;
        x = std::move(y);
        if (it > 1 && std::abs(next - lambda) <= tol * next) {
            return {next, std::move(x), it};
        }
        lambda = next;
    }
    throw NonConvergence("principal_eigenvalue: inverse power iteration did not converge");
}

double inner(const Field& u, const Field& v, const RectDomain& dom) {
    require_match(u, dom, "inner");
    require_match(v, dom, "inner");
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * v[k];
    return acc * dom.cell();
}

double lp_norm(const Field& w, double m, const RectDomain& dom) {
    require_match(w, dom, "lp_norm");
    const double e = m + 1.0;
    double acc = 0.0;
    for (double v : w.values) acc += std::pow(std::abs(v), e);
    return std::pow(acc * dom.cell(), 1.0 / e);
}

double l2_norm(const Field& w, const RectDomain& dom) { return std::sqrt(inner(w, w, dom)); }

double w_norm_of_laplacian(const Field& theta, const Exponents& exps, const RectDomain& dom) {
    return lp_norm(theta, 1.0 / exps.q, dom);
}

double w_norm(const Field& w, const Exponents& exps, const RectDomain& dom) {
    return w_norm_of_laplacian(laplacian(w, dom), exps, dom);
}

Field random_smooth_field(const RectDomain& dom, std::uint64_t seed, int modes) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> coef(static_cast<std::size_t>(modes) * modes);
    for (double& c : coef) c = normal(rng);
    Field w(dom);
    for (int j = 0; j < dom.ny; ++j) {
        for (int i = 0; i < dom.nx; ++i) {
            double acc = 0.0;
            for (int l = 1; l <= modes; ++l) {
                const double sy = std::sin(std::numbers::pi * l * dom.y(j) / dom.b);
                for (int k = 1; k <= modes; ++k) {
                    const double sx = std::sin(std::numbers::pi * k * dom.x(i) / dom.a);
                    acc += coef[static_cast<std::size_t>(l - 1) * modes + (k - 1)] * sx * sy /
                           (k * k + l * l);
                }
            }
            w.at(i, j) = acc;
        }
    }
    return w;
}

double sobolev_ratio(const Field& w, double m, const Exponents& exps, const RectDomain& dom) {
    const double wn = w_norm(w, exps, dom);
    if (wn == 0.0) return 0.0;
    return std::pow(lp_norm(w, m, dom) / wn, m + 1.0);
}

namespace {

// log of ‖Δ^{-1}θ‖_{m+1}^{m+1} / ‖θ‖_β^{m+1} and its θ-gradient.
struct LogRatio {
    double value;
    Field grad;
};

LogRatio log_ratio(const Field& theta, double m, double beta, const PoissonSolver& solver,
                   bool with_grad) {
    const RectDomain& dom = solver.domain();
    const double c = dom.cell();
    const Field w = solver.solve(theta);
    double A = 0.0;
    double B = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        A += std::pow(std::abs(w[k]), m + 1.0);
        B += std::pow(std::abs(theta[k]), beta);
    }
    A *= c;
    B *= c;
    LogRatio out{std::log(A) - (m + 1.0) / beta * std::log(B), {}};
    if (!with_grad) return out;
    Field dw(dom);
    for (std::size_t k = 0; k < w.size(); ++k) {
        dw[k] = std::copysign(std::pow(std::abs(w[k]), m), w[k]);
    }
    Field gA = solver.solve(dw);
    out.grad = Field(dom);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double gB = beta * c * std::copysign(std::pow(std::abs(theta[k]), beta - 1.0), theta[k]);
        out.grad[k] = (m + 1.0) * c * gA[k] / A - (m + 1.0) / beta * gB / B;
    }
    return out;
}

double euclid(const Field& f) {
    double acc = 0.0;
    for (double v : f.values) acc += v * v;
    return std::sqrt(acc);
}

// Normalized gradient ascent; returns the best log-ratio and leaves θ at the maximizer.
double ascend(Field& theta, double m, double beta, const PoissonSolver& solver, int iterations) {
    theta *= 1.0 / euclid(theta);
    LogRatio cur = log_ratio(theta, m, beta, solver, true);
    double step = 0.5;
    for (int it = 0; it < iterations; ++it) {
        const double gnorm = euclid(cur.grad);
        if (!(gnorm > 0.0)) break;
        bool improved = false;
        while (step > 1e-10) {
            Field trial = theta;
            for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += step * cur.grad[k] / gnorm;
            trial *= 1.0 / euclid(trial);
            const LogRatio cand = log_ratio(trial, m, beta, solver, false);
            if (std::isfinite(cand.value) && cand.value > cur.value) {
                theta = std::move(trial);
                cur = log_ratio(theta, m, beta, solver, true);
                step = std::min(1.0, 2.0 * step);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return cur.value;
}

}  // namespace

SobolevEstimate sobolev_constant_estimate(const RectDomain& dom, double m, const Exponents& exps,
                                          const SobolevOptions& opt) {
    if (!(m > 0.0)) throw InvalidExponents("sobolev_constant_estimate requires m > 0");
    const PoissonSolver solver(dom);
    const double beta = (exps.q + 1.0) / exps.q;
    SobolevEstimate est;

    auto run_start = [&](Field theta) {
        const double lr = ascend(theta, m, beta, solver, opt.iterations);
        const double val = std::exp(lr);
        if (val > est.value) {
            est.value = val;
            est.maximizer = solver.solve(theta);
        }
        est.per_start.push_back(est.value);
        return val;
    };

    const EigenPair eig = principal_eigenvalue(dom);
    est.from_phi1 = run_start(laplacian(eig.phi1, dom));
    for (int k = 0; k < opt.random_starts; ++k) {
        const Field w = random_smooth_field(dom, opt.seed + static_cast<std::uint64_t>(k));
        run_start(laplacian(w, dom));
    }
    return est;
}

}  // namespace hamvar
