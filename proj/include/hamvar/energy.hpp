#pragma once

// Reduced fourth-order functional
//
//   J(w) = Σ hx hy [ Ψ(μ, Δ_h w) − F₊(λ, w) ]
//
// whose critical points are the grid solutions of Δ_h ψ(μ, Δ_h w) = f₊(λ, w)
// with Navier data; v = w and u = −ψ(μ, Δ_h w) then solve the original system.

#include <memory>

#include "hamvar/grid.hpp"
#include "hamvar/nonlinearity.hpp"

namespace hamvar {

struct EnergyReport {
    double value = 0.0;
    double convex_part = 0.0;     // Σ h² Ψ(μ, Δ_h w)
    double potential_part = 0.0;  // Σ h² F₊(λ, w)
    double grad_norm = 0.0;       // discrete L² norm of gradient()
};

struct ResidualReport {
    double r1 = 0.0;  // −Δu = f₊(λ,v)
    double r2 = 0.0;  // −Δv = g(μ,u)
};

[[nodiscard]] EnergyReport energy(const Field& w, const SystemParams& params,
                                  const RectDomain& dom);

/// Δ_h ψ(μ, Δ_h w) − f₊(λ, w): the Riesz representative of DJ(w) in the
/// discrete L² product.
[[nodiscard]] Field gradient(const Field& w, const SystemParams& params, const RectDomain& dom);

/// u = −ψ(μ, Δ_h w) nodewise.
[[nodiscard]] Field recover_u(const Field& w, double mu, const Exponents& exps,
                              const RectDomain& dom);

[[nodiscard]] ResidualReport system_residual(const Field& u, const Field& v,
                                             const SystemParams& params, const RectDomain& dom);

/// Nodewise right-hand side of the reduced equation. Full is f₊(λ,·); Sublinear
/// drops the p-term and fixes λ = 1; Truncated freezes f₊ outside [lower, upper].
struct Potential {
    enum class Kind { Full, Sublinear, Truncated };

    Kind kind = Kind::Full;
    double lambda = 0.0;
    Field lower;
    Field upper;

    static Potential full(double lambda) { return {Kind::Full, lambda, {}, {}}; }
    static Potential sublinear() { return {Kind::Sublinear, 1.0, {}, {}}; }
    static Potential truncated(double lambda, Field lower, Field upper) {
        return {Kind::Truncated, lambda, std::move(lower), std::move(upper)};
    }

    [[nodiscard]] double f(std::size_t k, double w, const Exponents& exps) const;
    [[nodiscard]] double F(std::size_t k, double w, const Exponents& exps) const;
};

/// The functional written in θ = Δ_h w, where the convex part is separable:
/// E(θ) = Σ h² [Ψ(μ,θ) − F(Δ_h⁻¹θ)]. Its θ-gradient ψ(μ,θ) − Δ_h⁻¹ f(w) is
/// smooth relative to the stencil, which is what the descent methods use.
class ReducedEnergy {
public:
    ReducedEnergy(const RectDomain& dom, double mu, const Exponents& exps, Potential pot);

    struct State {
        Field theta;
        Field w;
        Field psi;
        Field f;
        double value = 0.0;
        double convex = 0.0;
        double potential = 0.0;
    };

    [[nodiscard]] State evaluate(const Field& theta) const;
    /// ψ(θ) − Δ_h⁻¹ f(w).
    [[nodiscard]] Field theta_gradient(const State& st) const;
    /// Δ_h ψ(θ) − f(w); equals gradient() for the full potential.
    [[nodiscard]] Field w_gradient(const State& st) const;
    /// g′(μ,u) per node with u floored away from 0: inverse of the diagonal of
    /// the θ-Hessian of the convex part.
    [[nodiscard]] Field preconditioner(const State& st) const;

    /// E(b + t·d) and its t-derivative; wb = Δ_h⁻¹ b and wd = Δ_h⁻¹ d are
    /// supplied by the caller.
    struct RayValue {
        double value;
        double slope;
    };
    [[nodiscard]] RayValue along_ray(const Field& b, const Field& wb, const Field& d,
                                     const Field& wd, double t) const;

    [[nodiscard]] const RectDomain& domain() const { return dom_; }
    [[nodiscard]] const PoissonSolver& poisson() const { return *solver_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] const Exponents& exps() const { return exps_; }
    [[nodiscard]] const Potential& potential() const { return pot_; }

private:
    RectDomain dom_;
    double mu_;
    Exponents exps_;
    Potential pot_;
    std::shared_ptr<const PoissonSolver> solver_;
};

/// Residuals of −Δu = f(v), −Δv = g(μ,u) for an arbitrary potential.
[[nodiscard]] ResidualReport residual_with(const Field& u, const Field& v, double mu,
                                           const Exponents& exps, const Potential& pot,
                                           const RectDomain& dom);

}  // namespace hamvar
