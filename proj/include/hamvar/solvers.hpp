#pragma once

// Two-solution pipeline for the reduced problem: a local minimum of J inside
// a ball of the W-norm and a mountain-pass critical point beyond it, plus the
// sublinear auxiliary problem, sub-solution scaling, the truncated problem
// and the continuation of the existence threshold λ*(μ).

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hamvar/energy.hpp"
#include "hamvar/grid.hpp"
#include "hamvar/nonlinearity.hpp"

namespace hamvar {

struct BallGeometry {
    double R0 = 0.0;
    double r0 = 0.0;
    double c0 = 0.0;
    double mu0 = 0.0;
    double lambda0 = 0.0;
    double delta0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double eta = 0.1;
    double S_qr = 0.0;  // discrete embedding estimates behind c2, c3
    double S_qp = 0.0;
};

struct GeometryOptions {
    double eta = 0.1;
    SobolevOptions sobolev;
    /// Replaces the computed R0 (and everything derived from it) when > 0.
    double R0_override = 0.0;
};

[[nodiscard]] BallGeometry ball_geometry(const SystemParams& params, const RectDomain& dom,
                                         const GeometryOptions& opt = {});

enum class SolutionKind { BallMin, MountainPass, Truncated, Sublinear };
[[nodiscard]] std::string to_string(SolutionKind k);

struct SolveResult {
    Field v;
    Field u;
    double energy = 0.0;
    SolutionKind kind = SolutionKind::BallMin;
    double grad_norm = 0.0;  // discrete L² norm of the w-gradient
    ResidualReport residuals;
    int iterations = 0;
    double w_norm = 0.0;     // ‖v‖_W
};

struct SolverOptions {
    double tol = 1e-6;
    int max_iter = 5000;
    int memory = 10;
    int path_nodes = 31;
    int path_sweeps = 40;
    int boundary_patience = 20;
};

/// Local minimum of J in ‖w‖_W ≤ R0 from the seed λ^σ φ₁/‖φ₁‖_W,
/// σ = q/(1−qr) + 1/2. For λ = 0 returns the trivial minimum.
/// Throws BoundaryStall, NonConvergence.
[[nodiscard]] SolveResult minimize_in_ball(const SystemParams& params, const RectDomain& dom,
                                           const BallGeometry& geom,
                                           const SolverOptions& opt = {});

/// Critical point of mountain-pass type between `w_min` and a far point t̃φ₁:
/// string deformation of a discrete path, then local minimax refinement of
/// the path maximum along rays. Throws Collapse, NonConvergence.
[[nodiscard]] SolveResult mountain_pass(const SystemParams& params, const RectDomain& dom,
                                        const SolveResult& w_min, const SolverOptions& opt = {});

/// Positive minimizer of Σ h²[q/(q+1)|Δ_h w|^{(q+1)/q} − w₊^{r+1}/(r+1)].
[[nodiscard]] SolveResult solve_sublinear(const RectDomain& dom, const Exponents& exps,
                                          const SolverOptions& opt = {});

/// (u̲, v̲) = (λ̲^{1/(1−qr)} u_ω, λ̲^{q/(1−qr)} ω).
[[nodiscard]] std::pair<Field, Field> subsolution_pair(double lambda_under,
                                                       const SolveResult& omega,
                                                       const Exponents& exps);

/// Minimizer of the energy with f₊ frozen outside [v_under, v_over].
/// Throws OrderViolation unless v_under < v_over at every node.
[[nodiscard]] SolveResult minimize_truncated(const SystemParams& params, const RectDomain& dom,
                                             const Field& v_under, const Field& v_over,
                                             const SolverOptions& opt = {});

/// J̄ at w for the trap [v_under, v_over].
[[nodiscard]] double truncated_energy(const Field& w, const SystemParams& params,
                                      const Field& v_under, const Field& v_over,
                                      const RectDomain& dom);

/// J̄ − J for any w inside the trap: −λr/(r+1)‖v̲‖^{r+1}_{r+1} − p/(p+1)‖v̲‖^{p+1}_{p+1}.
[[nodiscard]] double truncation_offset(const SystemParams& params, const Field& v_under,
                                       const RectDomain& dom);

enum class Evidence { TwoSolutions, OneSolution, NotDetected };
[[nodiscard]] std::string to_string(Evidence e);

struct ProbeReport {
    Evidence evidence = Evidence::NotDetected;
    int nontrivial = 0;
    double R0_used = 0.0;
    std::string note;
};

/// Runs minimize_in_ball and mountain_pass at (λ, μ) and counts the
/// nontrivial solutions that converged with residuals ≤ tol. NotDetected is
/// not a proof of non-existence.
[[nodiscard]] ProbeReport probe_detail(double lambda, double mu, const Exponents& exps,
                                       const RectDomain& dom, const SolverOptions& opt = {});
[[nodiscard]] Evidence solvability_probe(double lambda, double mu, const Exponents& exps,
                                         const RectDomain& dom, const SolverOptions& opt = {});

struct CurvePoint {
    double mu = 0.0;
    double lambda_star = 0.0;
    /// +inf when the analytic bound is unavailable (μ = 0 or p, q ≤ 1).
    double lambda_ub = std::numeric_limits<double>::infinity();
    Evidence evidence = Evidence::NotDetected;
    int probes = 0;
    /// Smallest probed λ that gave NotDetected (λ_ub if none was probed).
    double lambda_fail = std::numeric_limits<double>::infinity();
};

struct BifurcationCurve {
    std::vector<CurvePoint> points;
    double resolution = 1e-2;
};

struct TraceOptions {
    SolverOptions solver;
    double resolution = 1e-2;  // relative bisection resolution
    int max_probes = 20;       // per μ
    double lambda_base = 1e-3; // lattice origin
    int jobs = 1;
};

/// λ*(μ) by bisection on the lattice λ_k = λ_base (1+resolution)^k, shared by
/// all μ, bracketed above by nonexistence_bound or by doubling when that is
/// unavailable. Distinct μ run on up to `jobs` threads; the result does not
/// depend on the thread count.
[[nodiscard]] BifurcationCurve trace_lambda_star(const std::vector<double>& mu_samples,
                                                 const Exponents& exps, const RectDomain& dom,
                                                 const TraceOptions& opt = {});

}  // namespace hamvar
