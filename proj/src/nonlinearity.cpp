#include "hamvar/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hamvar/errors.hpp"

namespace hamvar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// log(e^a + e^b) without overflow.
double log_sum_exp(double a, double b) {
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

// Bracketed coefficient shared by C_rp and C_sq.
double hyperbola_coefficient(double a, double b) {
    const double x = (1.0 - a) / (b - 1.0);
    return std::pow(x, -(1.0 - a) / (b - a)) + std::pow(x, (b - 1.0) / (b - a));
}

}  // namespace

bool Exponents::satisfies_a2() const {
    return r < std::min(1.0, p) && s < std::min(1.0, q);
}

bool Exponents::satisfies_a3() const { return r < 1.0 / q; }

bool Exponents::superlinear() const { return q * p > 1.0; }

void Exponents::require_positive() const {
    if (!positive_finite(p) || !positive_finite(q) || !positive_finite(r) ||
        !positive_finite(s)) {
        throw InvalidExponents("exponents must be finite and positive: " + describe());
    }
}

void Exponents::require_valid() const {
    require_positive();
    if (!satisfies_a2()) {
        throw InvalidExponents("exponents require r < min(1,p) and s < min(1,q): " + describe());
    }
    if (!satisfies_a3()) {
        throw InvalidExponents("exponents require r < 1/q: " + describe());
    }
    if (!superlinear()) {
        throw InvalidExponents("two-solution theory requires q*p > 1: " + describe());
    }
}

std::string Exponents::describe() const {
    std::ostringstream os;
    os << "(p,q,r,s) = (" << p << ", " << q << ", " << r << ", " << s << ")";
    return os.str();
}

void SystemParams::require_valid() const {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InvalidExponents("lambda must be finite and non-negative");
    }
    if (!std::isfinite(mu) || mu < 0.0) {
        throw InvalidExponents("mu must be finite and non-negative");
    }
    exps.require_valid();
}

double eval_g(double mu, double zeta, const Exponents& exps) {
    if (zeta == 0.0) return 0.0;
    const double a = std::abs(zeta);
    const double val = mu * std::pow(a, exps.s) + std::pow(a, exps.q);
    return std::copysign(val, zeta);
}

double eval_g_prime(double mu, double zeta, const Exponents& exps) {
    const double a = std::abs(zeta);
    const double lower = mu > 0.0 ? mu * exps.s * std::pow(a, exps.s - 1.0) : 0.0;
    return lower + exps.q * std::pow(a, exps.q - 1.0);
}

double eval_G(double mu, double zeta, const Exponents& exps) {
    const double a = std::abs(zeta);
    return mu * std::pow(a, exps.s + 1.0) / (exps.s + 1.0) +
           std::pow(a, exps.q + 1.0) / (exps.q + 1.0);
}

double eval_psi(double mu, double theta, const Exponents& exps, double tol) {
    if (!std::isfinite(theta)) {
        throw NonConvergence("eval_psi: non-finite theta");
    }
    if (theta == 0.0) return 0.0;
    const double a = std::abs(theta);
    if (mu == 0.0) {
        return std::copysign(std::pow(a, 1.0 / exps.q), theta);
    }

    const double log_theta = std::log(a);
    const double log_mu = std::log(mu);
    const double s = exps.s;
    const double q = exps.q;
    const double ln2 = std::log(2.0);

    double x_hi = std::min(log_theta / q, (log_theta - log_mu) / s);
    double x_lo = std::min((log_theta - ln2) / q, (log_theta - ln2 - log_mu) / s);
    double x = x_hi;
    const double h_tol = std::max(1e-3 * tol, 8.0 * kEps * std::max(1.0, std::abs(log_theta)));

    bool converged = false;
    for (int it = 0; it < kPsiMaxIterations; ++it) {
        const double la = log_mu + s * x;
        const double lb = q * x;
        const double h = log_sum_exp(la, lb) - log_theta;
        if (std::abs(h) <= h_tol) {
            converged = true;
            break;
        }
        if (h > 0.0) {
            x_hi = x;
        } else {
            x_lo = x;
        }
        // d/dx log(μe^{sx} + e^{qx}) is a convex combination of s and q.
        const double w_lower = 1.0 / (1.0 + std::exp(lb - la));
        const double dh = s * w_lower + q * (1.0 - w_lower);
        double next = x - h / dh;
        if (!(next > x_lo && next < x_hi)) {
            next = 0.5 * (x_lo + x_hi);
        }
        if (std::abs(next - x) <= 4.0 * kEps * std::max(1.0, std::abs(x))) {
            x = next;
            converged = true;
            break;
        }
        x = next;
    }
    const double zeta = std::exp(x);
    if (!converged) {
        const double resid = std::abs(eval_g(mu, zeta, exps) - a);
        if (resid > tol * std::max(1.0, a)) {
            throw NonConvergence("eval_psi: safeguarded Newton did not converge for mu=" +
                                 std::to_string(mu) + " theta=" + std::to_string(theta));
        }
    }
    return std::copysign(zeta, theta);
}

PsiPair eval_psi_Psi(double mu, double theta, const Exponents& exps, double tol) {
    const double zeta = eval_psi(mu, theta, exps, tol);
    const double a = std::abs(theta);
    const double z = std::abs(zeta);
    return {zeta, z * a - eval_G(mu, z, exps)};
}

double eval_Psi(double mu, double theta, const Exponents& exps, double tol) {
    return eval_psi_Psi(mu, theta, exps, tol).Psi;
}

double eval_f_plus(double lambda, double zeta, const Exponents& exps) {
    if (zeta <= 0.0) return 0.0;
    return lambda * std::pow(zeta, exps.r) + std::pow(zeta, exps.p);
}

double eval_F_plus(double lambda, double zeta, const Exponents& exps) {
    if (zeta <= 0.0) return 0.0;
    return lambda * std::pow(zeta, exps.r + 1.0) / (exps.r + 1.0) +
           std::pow(zeta, exps.p + 1.0) / (exps.p + 1.0);
}

ThetaThreshold threshold_theta_mu(double mu, const Exponents& exps) {
    const double q = exps.q;
    const double s = exps.s;
    if (!(q > s)) {
        throw InvalidExponents("threshold_theta_mu requires q > s: " + exps.describe());
    }
    const double k = s * (1.0 - s) / (q * (q - s));
    const double C_qs = std::pow(k, s / (q - s)) + std::pow(k, q / (q - s));
    if (mu == 0.0 || q <= 1.0) {
        return {0.0, 0.0, C_qs};
    }
    const double zeta_mu = std::pow(k, 1.0 / (q - s)) * std::pow(mu, 1.0 / (q - s));
    return {zeta_mu, C_qs * std::pow(mu, q / (q - s)), C_qs};
}

double growth_split_theta(double mu, const Exponents& exps) {
    const double q = exps.q;
    const double s = exps.s;
    if (!(q > s)) {
        throw InvalidExponents("growth_split_theta requires q > s: " + exps.describe());
    }
    const double k = s * (1.0 - s) / (q * (q - s));
    const double C_qs = std::pow(k, s / (q - s)) + std::pow(k, q / (q - s));
    return C_qs * std::pow(mu, q / (q - s));
}

GrowthConstants growth_constants(const Exponents& exps) {
    const double q = exps.q;
    const double s = exps.s;
    if (!(q > s) || !(s < 1.0)) {
        throw InvalidExponents("growth constants require s < min(1,q): " + exps.describe());
    }
    GrowthConstants gc{};
    gc.C_tilde = 1.0 + q * (q - s) / (s * (1.0 - s));
    gc.c_tilde = 1.0 + s * (1.0 - s) / (q * (q - s));
    gc.C_hat = std::pow(gc.C_tilde, -1.0 / q);
    gc.c_hat = std::pow(gc.c_tilde, -1.0 / s);
    return gc;
}

NonexistenceConstants nonexistence_constant(const Exponents& exps) {
    if (!(exps.p > 1.0) || !(exps.q > 1.0)) {
        throw InvalidExponents("non-existence constants require p, q > 1: " + exps.describe());
    }
    if (!(exps.r > 0.0 && exps.r < 1.0) || !(exps.s > 0.0 && exps.s < 1.0)) {
        throw InvalidExponents("non-existence constants require r, s in (0,1): " +
                               exps.describe());
    }
    NonexistenceConstants nc{};
    nc.C_rp = hyperbola_coefficient(exps.r, exps.p);
    nc.C_sq = hyperbola_coefficient(exps.s, exps.q);
    nc.C_rspq = 1.0 / (nc.C_rp * nc.C_sq);
    return nc;
}

double nonexistence_bound(double mu, const Exponents& exps, double lambda1) {
    if (!(mu > 0.0)) {
        throw InvalidExponents("nonexistence_bound requires mu > 0");
    }
    if (!(lambda1 > 0.0)) {
        throw InvalidExponents("nonexistence_bound requires lambda1 > 0");
    }
    const auto nc = nonexistence_constant(exps);
    const double p = exps.p, q = exps.q, r = exps.r, s = exps.s;
    const double rhs = nc.C_rspq * lambda1 * lambda1 / std::pow(mu, (q - 1.0) / (q - s));
    return std::pow(rhs, (p - r) / (p - 1.0));
}

}  // namespace hamvar
