#include "hamvar/verify.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "hamvar/energy.hpp"

namespace hamvar {

namespace {

std::string tag(const char* name, const Exponents& e) {
    std::ostringstream os;
    os << name << "(q=" << e.q << ",s=" << e.s << ")";
    return os.str();
}

std::string at(double mu, double theta) {
    std::ostringstream os;
    os.precision(17);
    os << "(mu=" << mu << ", theta=" << theta << ")";
    return os.str();
}

std::string at_field(const Field& w, double lambda, double mu) {
    std::ostringstream os;
    os.precision(17);
    os << "(field=0x" << std::hex << field_hash(w) << std::dec << ", lambda=" << lambda
       << ", mu=" << mu << ")";
    return os.str();
}

}  // namespace

void PropertyReport::record(double margin, double tol, const std::string& where) {
    ++samples;
    if (margin < worst_margin) worst_margin = margin;
    if (!(margin >= -tol)) {
        ++violations;
        if (records.size() < kMaxViolationRecords) records.push_back(where);
    }
}

LogSampler::LogSampler(std::uint64_t seed) : rng_(seed) {}

double LogSampler::next01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double LogSampler::uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

double LogSampler::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

double LogSampler::mu() { return log_uniform(1e-6, 1e6); }

double LogSampler::theta() {
    const double mag = log_uniform(1e-6, 1e6);
    return (rng_() & 1U) ? mag : -mag;
}

std::uint64_t field_hash(const Field& f) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : f.values) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

PropertyReport check_roundtrip(const Exponents& exps, std::size_t sample_count,
                               std::uint64_t seed, double tol) {
    exps.require_positive();
    PropertyReport rep;
    rep.property_id = tag("psi_roundtrip", exps);
    LogSampler rng(seed);
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double mu = rng.mu();
        const double theta = rng.theta();
        const double err = std::abs(eval_g(mu, eval_psi(mu, theta, exps), exps) - theta) /
                           std::max(1.0, std::abs(theta));
        rep.record(tol - err, 0.0, at(mu, theta));
    }
    return rep;
}

PropertyReport check_comparison(const Exponents& exps, std::size_t sample_count,
                                std::uint64_t seed) {
    exps.require_positive();
    const double q = exps.q, s = exps.s;
    PropertyReport rep;
    rep.property_id = tag("comparison", exps);
    LogSampler rng(seed);
    double worst_equality = 0.0;
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double mu = rng.mu();
        const double theta = rng.theta();
        const PsiPair pp = eval_psi_Psi(mu, theta, exps);
        const double pt = pp.psi * theta;
        const double scale = std::max(pt, 1e-300);
        rep.record((q / (q + 1.0) * pt - pp.Psi) / scale, kVerifySlack, at(mu, theta));
        rep.record((pp.Psi - s / (s + 1.0) * pt) / scale, kVerifySlack, at(mu, theta));
        // equality of the upper bound at μ = 0
        const PsiPair p0 = eval_psi_Psi(0.0, theta, exps);
        const double pt0 = p0.psi * theta;
        const double dev = std::abs(p0.Psi - q / (q + 1.0) * pt0) / std::max(pt0, 1e-300);
        worst_equality = std::max(worst_equality, dev);
        rep.record(-dev, kVerifySlack, at(0.0, theta));
    }
    rep.details.emplace_back("mu0_equality_max_rel_dev", worst_equality);
    return rep;
}

PropertyReport check_growth(const Exponents& exps, std::size_t sample_count,
                            std::uint64_t seed) {
    exps.require_positive();
    const double q = exps.q, s = exps.s;
    const GrowthConstants gc = growth_constants(exps);
    PropertyReport rep;
    rep.property_id = tag("growth", exps);
    rep.details.emplace_back("C_hat", gc.C_hat);
    rep.details.emplace_back("c_hat", gc.c_hat);
    LogSampler rng(seed);
    double worst_equality = 0.0;
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double mu = rng.mu();
        const double theta = rng.theta();
        const double a = std::abs(theta);
        const double pt = eval_psi(mu, theta, exps) * theta;
        const double big = std::pow(a, (q + 1.0) / q);
        rep.record((big - pt) / big, kVerifySlack, at(mu, theta));
        const double split = growth_split_theta(mu, exps);
        const double lower = a >= split ? gc.C_hat * big
                                        : std::pow(mu, -1.0 / s) * gc.c_hat *
                                              std::pow(a, (s + 1.0) / s);
        rep.record((pt - lower) / std::max(pt, 1e-300), kVerifySlack, at(mu, theta));
        // equality at μ = 0
        const double pt0 = eval_psi(0.0, theta, exps) * theta;
        const double dev = std::abs(pt0 - big) / big;
        worst_equality = std::max(worst_equality, dev);
        rep.record(-dev, kVerifySlack, at(0.0, theta));
    }
    rep.details.emplace_back("mu0_equality_max_rel_dev", worst_equality);
    return rep;
}

PropertyReport check_strong_monotonicity(const Exponents& exps, std::size_t sample_count,
                                         std::uint64_t seed) {
    exps.require_positive();
    const double q = exps.q, s = exps.s;
    PropertyReport rep;
    rep.property_id = tag("strong_monotonicity", exps);
    LogSampler rng(seed);
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double mu = rng.mu();
        const double t1 = rng.theta();
        const double t2 = (i % 10 == 9) ? -t1 : rng.theta();
        if (t1 == t2) continue;
        const double p1 = eval_psi(mu, t1, exps);
        const double p2 = eval_psi(mu, t2, exps);
        const double dt = std::abs(t1 - t2);
        const double denom = std::pow(mu, 1.0 / s) + std::pow(std::abs(p1), (q - s) / s) +
                             std::pow(std::abs(p2), (q - s) / s);
        const double ratio = (p1 - p2) * (t1 - t2) * denom / std::pow(dt, (s + 1.0) / s);
        inf = std::min(inf, ratio);
        // positivity is the claim; the ratio itself is the slack
        rep.record(ratio > 0.0 ? ratio : -1.0, 0.0, at(mu, t1) + " vs theta=" + std::to_string(t2));
    }
    rep.empirical_constant = inf;
    return rep;
}

PropertyReport check_shape(const Exponents& exps, std::size_t sample_count, std::uint64_t seed) {
    exps.require_positive();
    PropertyReport rep;
    rep.property_id = tag("shape", exps);
    LogSampler rng(seed);
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double mu = rng.mu();
        const double theta = std::abs(rng.theta());
        const double theta2 = theta * (1.0 + rng.log_uniform(1e-6, 1.0));
        const PsiPair a = eval_psi_Psi(mu, theta, exps);
        const PsiPair b = eval_psi_Psi(mu, -theta, exps);
        const PsiPair c = eval_psi_Psi(mu, theta2, exps);
        rep.record(a.psi == -b.psi ? 0.0 : -1.0, 0.0, at(mu, theta) + " odd");
        rep.record(a.Psi == b.Psi ? 0.0 : -1.0, 0.0, at(mu, theta) + " even");
        rep.record(c.psi > a.psi ? (c.psi - a.psi) / c.psi : -1.0, 0.0, at(mu, theta) + " increasing");
        const double r1 = a.Psi / theta;
        const double r2 = c.Psi / theta2;
        rep.record(r2 > r1 ? (r2 - r1) / r2 : -1.0, 0.0, at(mu, theta) + " Psi/theta increasing");
    }
    return rep;
}

PropertyReport check_energy_geometry(const BallGeometry& geom, const Exponents& exps,
                                     const RectDomain& dom, std::size_t sample_count,
                                     std::uint64_t seed, const EnergyGeometryOptions& opt) {
    exps.require_valid();
    dom.require_valid();
    const double q = exps.q, p = exps.p, r = exps.r;
    const double beta = (q + 1.0) / q;
    PropertyReport rep;
    rep.property_id = "energy_geometry";
    LogSampler rng(seed);

    // (a) annulus positivity and (c) the closed-form bound at λ = μ = 0
    const double c1_zero = q / (q + 1.0);
    double min_energy = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sample_count; ++i) {
        const std::uint64_t fseed = static_cast<std::uint64_t>(rng.uniform(0.0, 0x1.0p52));
        Field w = random_smooth_field(dom, fseed);
        const double R = rng.uniform(geom.r0, geom.R0);
        w *= R / w_norm(w, exps, dom);
        const double lambda = rng.uniform(0.0, geom.lambda0);
        const double mu = rng.uniform(0.0, geom.mu0);
        const double J = energy(w, SystemParams{lambda, mu, exps}, dom).value;
        min_energy = std::min(min_energy, J);
        rep.record(J > 0.0 ? 1.0 : -1.0, 0.0, at_field(w, lambda, mu));

        const double J0 = energy(w, SystemParams{0.0, 0.0, exps}, dom).value;
        const double bound = c1_zero * std::pow(R, beta) - geom.c3 * std::pow(R, p + 1.0);
        rep.record(bound > 0.0 ? (J0 - bound) / std::abs(J0) : -1.0, kVerifySlack,
                   at_field(w, 0.0, 0.0) + " closed-form bound");
    }
    rep.details.emplace_back("annulus_min_energy", min_energy);

    // (b) seed ladder
    const Field phi = sample(dom, [&](double x, double y) {
        return std::sin(std::numbers::pi * x / dom.a) * std::sin(std::numbers::pi * y / dom.b);
    });
    const double nphi = w_norm(phi, exps, dom);
    const double sigma = q / (1.0 - q * r) + 0.5;
    double prev_norm = std::numeric_limits<double>::infinity();
    for (double lambda : opt.ladder) {
        const Field v = (std::pow(lambda, sigma) / nphi) * phi;
        const double n = w_norm(v, exps, dom);
        const double J = energy(v, SystemParams{lambda, opt.ladder_mu, exps}, dom).value;
        rep.details.emplace_back("ladder_energy@" + std::to_string(lambda), J);
        rep.details.emplace_back("ladder_norm@" + std::to_string(lambda), n);
        rep.record(J < 0.0 ? 1.0 : -1.0, 0.0, at_field(v, lambda, opt.ladder_mu) + " ladder energy");
        rep.record(n < prev_norm ? 1.0 : -1.0, 0.0, at_field(v, lambda, opt.ladder_mu) + " ladder norm");
        prev_norm = n;
    }
    return rep;
}

std::vector<Exponents> standard_exponent_sets() {
    return {Exponents{3.0, 2.0, 0.25, 0.5}, Exponents{3.0, 3.0, 0.25, 0.25},
            Exponents{3.0, 0.8, 0.25, 0.3}};
}

std::vector<PropertyReport> run_nonlinearity_suites(const std::vector<Exponents>& sets,
                                                    std::size_t sample_count, std::uint64_t seed) {
    std::vector<PropertyReport> out;
    for (const Exponents& e : sets) {
        out.push_back(check_roundtrip(e, sample_count, seed));
        out.push_back(check_comparison(e, sample_count, seed + 1));
        out.push_back(check_growth(e, sample_count, seed + 2));
        out.push_back(check_strong_monotonicity(e, sample_count, seed + 3));
        out.push_back(check_shape(e, sample_count, seed + 4));
    }
    return out;
}

}  // namespace hamvar
