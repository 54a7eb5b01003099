#include <cmath>

#include <doctest.h>

#include "hamvar/verify.hpp"

using namespace hamvar;

namespace {

const Exponents base{3.0, 2.0, 0.25, 0.5};

double detail(const PropertyReport& r, const std::string& key) {
    for (const auto& [k, v] : r.details) {
        if (k == key) return v;
    }
    FAIL("missing detail " << key);
    return 0.0;
}

}  // namespace

TEST_CASE("comparison bounds are trivially tight at theta = 0") {
    const PsiPair pp = eval_psi_Psi(0.7, 0.0, base);
    CHECK(pp.psi * 0.0 == 0.0);
    CHECK(pp.Psi == 0.0);
}

TEST_CASE("comparison suite over 1e5 samples") {
    const PropertyReport r = check_comparison(base, 100000, 1);
    CHECK(r.passed());
    CHECK(r.violations == 0);
    CHECK(r.samples == 300000);
    CHECK(detail(r, "mu0_equality_max_rel_dev") <= 1e-12);
    CHECK(r.worst_margin >= -kVerifySlack);
}

TEST_CASE("growth suite and its constants") {
    for (const Exponents& e : standard_exponent_sets()) {
        const PropertyReport r = check_growth(e, 20000, 2);
        CAPTURE(r.property_id);
        CHECK(r.passed());
        CHECK(detail(r, "mu0_equality_max_rel_dev") <= 1e-12);
    }
    const PropertyReport r = check_growth(base, 10, 3);
    CHECK(detail(r, "C_hat") == doctest::Approx(std::pow(13.0, -0.5)).epsilon(1e-15));
    CHECK(detail(r, "c_hat") == doctest::Approx(std::pow(13.0 / 12.0, -2.0)).epsilon(1e-15));
}

TEST_CASE("strong monotonicity") {
    // θ₂ = −θ₁: (ψ₁ − ψ₂)(θ₁ − θ₂) = 2ψ(θ₁)·2θ₁ > 0
    for (double th : {1e-3, 0.5, 40.0}) {
        const double p1 = eval_psi(0.2, th, base);
        const double p2 = eval_psi(0.2, -th, base);
        CHECK((p1 - p2) * (2 * th) == doctest::Approx(4 * p1 * th).epsilon(1e-15));
        CHECK((p1 - p2) * (2 * th) > 0.0);
    }
    const PropertyReport a = check_strong_monotonicity(base, 100000, 11);
    const PropertyReport b = check_strong_monotonicity(base, 100000, 977);
    CHECK(a.passed());
    CHECK(b.passed());
    CHECK(a.empirical_constant > 0.0);
    CHECK(std::abs(a.empirical_constant - b.empirical_constant) <= 0.2 * a.empirical_constant);
}

TEST_CASE("shape and roundtrip suites") {
    for (const Exponents& e : standard_exponent_sets()) {
        CHECK(check_shape(e, 20000, 5).passed());
        CHECK(check_roundtrip(e, 20000, 6).passed());
    }
}

TEST_CASE("suites are deterministic and localize violations") {
    const auto a = run_nonlinearity_suites({base}, 2000, 42);
    const auto b = run_nonlinearity_suites({base}, 2000, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].property_id == b[i].property_id);
        CHECK(a[i].samples == b[i].samples);
        CHECK(a[i].worst_margin == b[i].worst_margin);
        CHECK(a[i].passed());
    }
    // an impossible tolerance forces violations, each tagged with its sample
    const PropertyReport r = check_roundtrip(base, 500, 1, -1.0);
    CHECK(r.violations == 500);
    CHECK(!r.passed());
    CHECK(r.records.size() == kMaxViolationRecords);
    CHECK(r.records.front().find("mu=") != std::string::npos);
    CHECK(r.records.front().find("theta=") != std::string::npos);
}

TEST_CASE("log sampler spans the configured decades") {
    LogSampler s(9);
    double lo = 1e300, hi = 0.0;
    int neg = 0;
    for (int i = 0; i < 20000; ++i) {
        const double m = s.mu();
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        neg += s.theta() < 0.0;
    }
    CHECK(lo >= 1e-6);
    CHECK(lo < 1e-5);
    CHECK(hi <= 1e6);
    CHECK(hi > 1e5);
    CHECK(neg > 9000);
    CHECK(neg < 11000);
}

TEST_CASE("field hash") {
    const RectDomain dom = RectDomain::unit_square(7);
    const Field a = random_smooth_field(dom, 1);
    Field b = a;
    CHECK(field_hash(a) == field_hash(b));
    b[3] = std::nextafter(b[3], 1.0);
    CHECK(field_hash(a) != field_hash(b));
}

TEST_CASE("energy geometry on a 32x32 grid") {
    const RectDomain dom = RectDomain::unit_square(31);
    const BallGeometry geom = ball_geometry(SystemParams{0.0, 0.05, base}, dom);
    const PropertyReport r = check_energy_geometry(geom, base, dom, 200, 7);
    CHECK(r.passed());
    CHECK(r.samples == 2 * 200 + 6);
    CHECK(detail(r, "annulus_min_energy") > 0.0);
    double prev = 1e300;
    for (double lam : {0.05, 0.025, 0.0125}) {
        CHECK(detail(r, "ladder_energy@" + std::to_string(lam)) < 0.0);
        const double n = detail(r, "ladder_norm@" + std::to_string(lam));
        CHECK(n < prev);
        prev = n;
    }
}
