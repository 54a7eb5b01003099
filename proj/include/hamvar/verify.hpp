#pragma once

// Sampling-based checks of the closed-form inequalities satisfied by ψ and Ψ
// and of the energy geometry around the origin.

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hamvar/grid.hpp"
#include "hamvar/nonlinearity.hpp"
#include "hamvar/solvers.hpp"

namespace hamvar {

inline constexpr double kVerifySlack = 1e-12;
inline constexpr std::size_t kMaxViolationRecords = 20;

struct PropertyReport {
    std::string property_id;
    std::size_t samples = 0;
    std::size_t violations = 0;
    /// Smallest relative slack seen (negative when violated).
    double worst_margin = std::numeric_limits<double>::infinity();
    /// Empirical constant where the suite estimates one, NaN otherwise.
    double empirical_constant = std::numeric_limits<double>::quiet_NaN();
    /// First few offending samples: "(mu, theta)" pairs or field hashes.
    std::vector<std::string> records;
    /// Named scalars specific to the suite.
    std::vector<std::pair<std::string, double>> details;

    [[nodiscard]] bool passed() const { return violations == 0 && samples > 0; }
    /// Counts a check with relative slack `margin`; a violation when margin < -tol.
    void record(double margin, double tol, const std::string& where);
};

/// Log-uniform sampler: μ ∈ [1e-6, 1e6], |θ| ∈ [1e-6, 1e6] with random sign.
class LogSampler {
public:
    explicit LogSampler(std::uint64_t seed);
    double mu();
    double theta();
    double log_uniform(double lo, double hi);
    double uniform(double lo, double hi);

private:
    std::mt19937_64 rng_;
    double next01();
};

/// FNV-1a hash of the raw bytes of a field.
[[nodiscard]] std::uint64_t field_hash(const Field& f);

/// |g(μ, ψ(μ,θ)) − θ| ≤ tol·max(1,|θ|).
[[nodiscard]] PropertyReport check_roundtrip(const Exponents& exps, std::size_t sample_count,
                                             std::uint64_t seed, double tol = 1e-10);
/// q/(q+1)ψθ ≥ Ψ ≥ s/(s+1)ψθ, and equality on the left at μ = 0.
[[nodiscard]] PropertyReport check_comparison(const Exponents& exps, std::size_t sample_count,
                                              std::uint64_t seed);
/// |θ|^{(q+1)/q} ≥ ψθ ≥ Ĉ|θ|^{(q+1)/q} (large |θ|), ≥ μ^{-1/s}ĉ|θ|^{(s+1)/s}
/// (small |θ|); equality on the left at μ = 0.
[[nodiscard]] PropertyReport check_growth(const Exponents& exps, std::size_t sample_count,
                                          std::uint64_t seed);
/// Positivity of (ψ₁−ψ₂)(θ₁−θ₂)(μ^{1/s}+|ψ₁|^{(q−s)/s}+|ψ₂|^{(q−s)/s})/|θ₁−θ₂|^{(s+1)/s};
/// the infimum is reported as empirical_constant.
[[nodiscard]] PropertyReport check_strong_monotonicity(const Exponents& exps,
                                                       std::size_t sample_count,
                                                       std::uint64_t seed);
/// Oddness of ψ, evenness of Ψ, strict increase of ψ and of Ψ(θ)/θ on θ > 0.
[[nodiscard]] PropertyReport check_shape(const Exponents& exps, std::size_t sample_count,
                                         std::uint64_t seed);

struct EnergyGeometryOptions {
    /// μ at which the seed ladder is evaluated.
    double ladder_mu = 0.05;
    std::vector<double> ladder = {0.05, 0.025, 0.0125};
};

/// (a) J > 0 for random smooth fields with r0 ≤ ‖w‖_W ≤ R0 and (λ,μ) in
/// [0,λ0]×[0,μ0]; (b) J(λ^σφ₁/‖φ₁‖_W) < 0 with decreasing norms along the
/// ladder; (c) at λ = μ = 0, J ≥ c1 R^{(q+1)/q} − c3 R^{p+1} > 0 on the annulus.
[[nodiscard]] PropertyReport check_energy_geometry(const BallGeometry& geom,
                                                   const Exponents& exps, const RectDomain& dom,
                                                   std::size_t sample_count, std::uint64_t seed,
                                                   const EnergyGeometryOptions& opt = {});

/// Exponent sets exercised by default: (q,s) ∈ {(2,0.5), (3,0.25), (0.8,0.3)}.
[[nodiscard]] std::vector<Exponents> standard_exponent_sets();

/// All nonlinearity suites for every set in `sets`.
[[nodiscard]] std::vector<PropertyReport> run_nonlinearity_suites(
    const std::vector<Exponents>& sets, std::size_t sample_count, std::uint64_t seed);

}  // namespace hamvar
