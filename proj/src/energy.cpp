#include "hamvar/energy.hpp"

#include <algorithm>
#include <cmath>

#include "hamvar/errors.hpp"

namespace hamvar {

double Potential::f(std::size_t k, double w, const Exponents& exps) const {
    switch (kind) {
    case Kind::Full:
        return eval_f_plus(lambda, w, exps);
    case Kind::Sublinear:
        return w > 0.0 ? std::pow(w, exps.r) : 0.0;
    case Kind::Truncated:
        return eval_f_plus(lambda, std::clamp(w, lower[k], upper[k]), exps);
    }
    return 0.0;
}

double Potential::F(std::size_t k, double w, const Exponents& exps) const {
    switch (kind) {
    case Kind::Full:
        return eval_F_plus(lambda, w, exps);
    case Kind::Sublinear:
        return w > 0.0 ? std::pow(w, exps.r + 1.0) / (exps.r + 1.0) : 0.0;
    case Kind::Truncated: {
        const double lo = lower[k];
        const double hi = upper[k];
        const double f_lo = eval_f_plus(lambda, lo, exps);
        if (w <= lo) return f_lo * w;
        const double base = f_lo * lo - eval_F_plus(lambda, lo, exps);
        if (w <= hi) return base + eval_F_plus(lambda, w, exps);
        return base + eval_F_plus(lambda, hi, exps) + eval_f_plus(lambda, hi, exps) * (w - hi);
    }
    }
    return 0.0;
}

EnergyReport energy(const Field& w, const SystemParams& params, const RectDomain& dom) {
    require_match(w, dom, "energy");
    const Field theta = laplacian(w, dom);
    Field psi(dom);
    EnergyReport rep;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const PsiPair pp = eval_psi_Psi(params.mu, theta[k], params.exps);
        psi[k] = pp.psi;
        rep.convex_part += pp.Psi;
        rep.potential_part += eval_F_plus(params.lambda, w[k], params.exps);
    }
    rep.convex_part *= dom.cell();
    rep.potential_part *= dom.cell();
    rep.value = rep.convex_part - rep.potential_part;
    Field g = laplacian(psi, dom);
    for (std::size_t k = 0; k < w.size(); ++k) g[k] -= eval_f_plus(params.lambda, w[k], params.exps);
    rep.grad_norm = l2_norm(g, dom);
    return rep;
}

Field gradient(const Field& w, const SystemParams& params, const RectDomain& dom) {
    require_match(w, dom, "gradient");
    const Field theta = laplacian(w, dom);
    Field psi(dom);
    for (std::size_t k = 0; k < w.size(); ++k) psi[k] = eval_psi(params.mu, theta[k], params.exps);
    Field g = laplacian(psi, dom);
    for (std::size_t k = 0; k < w.size(); ++k) g[k] -= eval_f_plus(params.lambda, w[k], params.exps);
    return g;
}

Field recover_u(const Field& w, double mu, const Exponents& exps, const RectDomain& dom) {
    const Field theta = laplacian(w, dom);
    Field u(dom);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = -eval_psi(mu, theta[k], exps);
    return u;
}

ResidualReport residual_with(const Field& u, const Field& v, double mu, const Exponents& exps,
                             const Potential& pot, const RectDomain& dom) {
    require_match(u, dom, "system_residual");
    require_match(v, dom, "system_residual");
    Field e1 = laplacian(u, dom);
    Field e2 = laplacian(v, dom);
    Field f1(dom);
    Field f2(dom);
    for (std::size_t k = 0; k < u.size(); ++k) {
        f1[k] = pot.f(k, v[k], exps);
        f2[k] = eval_g(mu, u[k], exps);
        e1[k] = -e1[k] - f1[k];
        e2[k] = -e2[k] - f2[k];
    }
    return {l2_norm(e1, dom) / std::max(1.0, l2_norm(f1, dom)),
            l2_norm(e2, dom) / std::max(1.0, l2_norm(f2, dom))};
}

ResidualReport system_residual(const Field& u, const Field& v, const SystemParams& params,
                               const RectDomain& dom) {
    return residual_with(u, v, params.mu, params.exps, Potential::full(params.lambda), dom);
}

ReducedEnergy::ReducedEnergy(const RectDomain& dom, double mu, const Exponents& exps,
                             Potential pot)
    : dom_(dom), mu_(mu), exps_(exps), pot_(std::move(pot)),
      solver_(std::make_shared<const PoissonSolver>(dom)) {
    if (pot_.kind == Potential::Kind::Truncated) {
        require_match(pot_.lower, dom, "truncated potential");
        require_match(pot_.upper, dom, "truncated potential");
    }
}

ReducedEnergy::State ReducedEnergy::evaluate(const Field& theta) const {
    require_match(theta, dom_, "ReducedEnergy::evaluate");
    State st;
    st.theta = theta;
    st.w = solver_->solve(theta);
    st.psi = Field(dom_);
    st.f = Field(dom_);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const PsiPair pp = eval_psi_Psi(mu_, theta[k], exps_);
        st.psi[k] = pp.psi;
        st.convex += pp.Psi;
        st.potential += pot_.F(k, st.w[k], exps_);
        st.f[k] = pot_.f(k, st.w[k], exps_);
    }
    st.convex *= dom_.cell();
    st.potential *= dom_.cell();
    st.value = st.convex - st.potential;
    return st;
}

Field ReducedEnergy::theta_gradient(const State& st) const {
    Field e = solver_->solve(st.f);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = st.psi[k] - e[k];
    return e;
}

Field ReducedEnergy::w_gradient(const State& st) const {
    Field g = laplacian(st.psi, dom_);
    g -= st.f;
    return g;
}

Field ReducedEnergy::preconditioner(const State& st) const {
    double umax = 0.0;
    for (double v : st.psi.values) umax = std::max(umax, std::abs(v));
    const double floor = umax > 0.0 ? 1e-3 * umax : 1.0;
    Field d(dom_);
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = eval_g_prime(mu_, std::max(std::abs(st.psi[k]), floor), exps_);
    }
    return d;
}

ReducedEnergy::RayValue ReducedEnergy::along_ray(const Field& b, const Field& wb, const Field& d,
                                                 const Field& wd, double t) const {
    double value = 0.0;
    double slope = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double th = b[k] + t * d[k];
        const double wk = wb[k] + t * wd[k];
        const PsiPair pp = eval_psi_Psi(mu_, th, exps_);
        value += pp.Psi - pot_.F(k, wk, exps_);
        slope += pp.psi * d[k] - pot_.f(k, wk, exps_) * wd[k];
    }
    return {value * dom_.cell(), slope * dom_.cell()};
}

}  // namespace hamvar
