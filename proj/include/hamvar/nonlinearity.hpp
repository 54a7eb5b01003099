#pragma once

// Closed-form scalar nonlinearities of the Hamiltonian system
//
//   -Δu = λ v₊^r + v₊^p,   -Δv = μ|u|^{s-1}u + |u|^{q-1}u,   u = v = 0 on ∂Ω
//
// and of its reduction by inversion, u = -ψ(μ, Δv), where ψ(μ,·) is the inverse
// of g(μ,ζ) = μ|ζ|^{s-1}ζ + |ζ|^{q-1}ζ and Ψ(μ,·) its primitive.

#include <string>

namespace hamvar {

struct Exponents {
    double p = 3.0;
    double q = 2.0;
    double r = 0.25;
    double s = 0.5;

    /// r < min(1,p) and s < min(1,q).
    [[nodiscard]] bool satisfies_a2() const;
    /// r < 1/q.
    [[nodiscard]] bool satisfies_a3() const;
    /// qp > 1.
    [[nodiscard]] bool superlinear() const;
    /// Subcriticality 1/(p+1) + 1/(q+1) > 1 - 2/N; always true for N = 2.
    [[nodiscard]] static constexpr bool satisfies_a1() { return true; }

    /// Throws InvalidExponents unless all powers are finite and positive.
    void require_positive() const;
    /// Throws InvalidExponents naming the first violated hypothesis among
    /// positivity, r < min(1,p), s < min(1,q), r < 1/q and qp > 1.
    void require_valid() const;
    [[nodiscard]] std::string describe() const;
};

struct SystemParams {
    double lambda = 0.0;
    double mu = 0.0;
    Exponents exps;

    void require_valid() const;
};

inline constexpr double kPsiTolerance = 1e-12;
inline constexpr int kPsiMaxIterations = 200;

[[nodiscard]] double eval_g(double mu, double zeta, const Exponents& exps);
/// ∂_ζ g(μ,ζ); +inf at ζ = 0 when μ > 0 (s < 1) or q < 1.
[[nodiscard]] double eval_g_prime(double mu, double zeta, const Exponents& exps);
/// G(μ,ζ) = μ|ζ|^{s+1}/(s+1) + |ζ|^{q+1}/(q+1).
[[nodiscard]] double eval_G(double mu, double zeta, const Exponents& exps);

/// Inverse of g(μ,·). Safeguarded Newton in log ζ inside the bracket
/// [min((θ/2)^{1/q}, (θ/2μ)^{1/s}), min(θ^{1/q}, (θ/μ)^{1/s})]; log g is convex
/// in log ζ so Newton from the upper end decreases monotonically onto the root.
/// Throws NonConvergence past kPsiMaxIterations.
[[nodiscard]] double eval_psi(double mu, double theta, const Exponents& exps,
                              double tol = kPsiTolerance);

/// Ψ(μ,θ) = ζθ - G(μ,ζ) with ζ = ψ(μ,θ).
[[nodiscard]] double eval_Psi(double mu, double theta, const Exponents& exps,
                              double tol = kPsiTolerance);

/// ψ and Ψ from a single root solve.
struct PsiPair {
    double psi;
    double Psi;
};
[[nodiscard]] PsiPair eval_psi_Psi(double mu, double theta, const Exponents& exps,
                                   double tol = kPsiTolerance);

[[nodiscard]] double eval_f_plus(double lambda, double zeta, const Exponents& exps);
[[nodiscard]] double eval_F_plus(double lambda, double zeta, const Exponents& exps);

struct ThetaThreshold {
    double zeta_mu;
    double theta_mu;
    double C_qs;
};

/// Inflection point of ψ(μ,·): ζ_μ = [s(1-s)/(q(q-s))]^{1/(q-s)} μ^{1/(q-s)} and
/// θ_μ = g(μ,ζ_μ) = C_{q,s} μ^{q/(q-s)}; both are 0 when μ = 0 or q <= 1.
/// Throws InvalidExponents if q <= s.
[[nodiscard]] ThetaThreshold threshold_theta_mu(double mu, const Exponents& exps);

/// θ at which the growth bounds switch, C_{q,s} μ^{q/(q-s)}, for any q > s.
/// Unlike threshold_theta_mu this does not zero out for q <= 1.
[[nodiscard]] double growth_split_theta(double mu, const Exponents& exps);

struct GrowthConstants {
    double C_tilde;  // 1 + q(q-s)/(s(1-s))
    double c_tilde;  // 1 + s(1-s)/(q(q-s))
    double C_hat;    // C_tilde^{-1/q}
    double c_hat;    // c_tilde^{-1/s}
};
[[nodiscard]] GrowthConstants growth_constants(const Exponents& exps);

struct NonexistenceConstants {
    double C_rp;
    double C_sq;
    double C_rspq;
};

/// Requires p, q > 1 (InvalidExponents otherwise).
[[nodiscard]] NonexistenceConstants nonexistence_constant(const Exponents& exps);

/// λ solving μ^{(q-1)/(q-s)} λ^{(p-1)/(p-r)} = C_rspq λ₁². Requires μ > 0, p, q > 1.
[[nodiscard]] double nonexistence_bound(double mu, const Exponents& exps, double lambda1);

}  // namespace hamvar
