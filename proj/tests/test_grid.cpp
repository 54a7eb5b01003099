#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hamvar/errors.hpp"
#include "hamvar/grid.hpp"
#include "oracles.hpp"

using namespace hamvar;

namespace {

constexpr double pi = std::numbers::pi;
const Exponents base{3.0, 2.0, 0.25, 0.5};

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST_CASE("laplacian of zero is zero") {
    const RectDomain dom = RectDomain::unit_square(15);
    const Field z = laplacian(Field(dom), dom);
    for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("laplacian matches the explicit stencil on random data and rectangles") {
    for (const RectDomain& dom : {RectDomain::unit_square(9), RectDomain{1.0, 2.0, 7, 13}, RectDomain{0.5, 3.0, 11, 5}}) {
        const Field w = random_smooth_field(dom, 42, 4);
        CHECK(max_abs_diff(laplacian(w, dom), oracle::stencil_laplacian(w, dom)) <= 1e-9);
    }
}

TEST_CASE("stencil is exact on bivariate quadratics") {
    const RectDomain dom = RectDomain::unit_square(63);
    const Field w = sample(dom, [](double x, double y) { return x * (1 - x) * y * (1 - y); });
    const Field lw = laplacian(w, dom);
    CHECK(lw.at(31, 31) == doctest::Approx(-1.0).epsilon(1e-12));
    for (int j = 0; j < dom.ny; ++j) {
        for (int i = 0; i < dom.nx; ++i) {
            const double x = dom.x(i), y = dom.y(j);
            CHECK(lw.at(i, j) == doctest::Approx(-2 * y * (1 - y) - 2 * x * (1 - x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("sine mode satisfies the discrete eigen relation") {
    for (const RectDomain& dom : {RectDomain::unit_square(31), RectDomain{1.0, 2.0, 15, 31}}) {
        const Field w = sample(dom, [&](double x, double y) { return std::sin(pi * x / dom.a) * std::sin(pi * y / dom.b); });
        const double lam = oracle::fd_eigenvalue(dom);
        const Field lw = laplacian(w, dom);
        for (std::size_t k = 0; k < w.size(); ++k) CHECK(lw[k] == doctest::Approx(-lam * w[k]).epsilon(1e-10).scale(1.0));
        CHECK(fd_principal_eigenvalue(dom) == doctest::Approx(lam).epsilon(1e-14));
    }
}

TEST_CASE("laplacian is symmetric in the discrete inner product") {
    const RectDomain dom{1.0, 1.5, 12, 17};
    const Field u = random_smooth_field(dom, 1);
    const Field v = random_smooth_field(dom, 2);
    const double a = inner(laplacian(u, dom), v, dom);
    const double b = inner(u, laplacian(v, dom), dom);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(inner(laplacian(u, dom), u, dom) < 0.0);
}

TEST_CASE("Poisson solver inverts the stencil") {
    for (const RectDomain& dom : {RectDomain::unit_square(31), RectDomain{1.0, 2.0, 9, 20}}) {
        const Field rhs = random_smooth_field(dom, 9, 8);
        const PoissonSolver ps(dom);
        const Field w = ps.solve(rhs);
        CHECK(max_abs_diff(oracle::stencil_laplacian(w, dom), rhs) <= 1e-9 * std::max(1.0, max_abs_diff(rhs, Field(dom))));
        CHECK(ps.lowest_eigenvalue() == doctest::Approx(oracle::fd_eigenvalue(dom)).epsilon(1e-13));
    }
}

TEST_CASE("principal eigenvalue on the unit square at h = 1/64") {
    const RectDomain dom = RectDomain::unit_square(63);
    const EigenPair ep = principal_eigenvalue(dom);
    const double h = 1.0 / 64.0;
    const double closed = 8.0 / (h * h) * std::pow(std::sin(pi * h / 2.0), 2);
    CHECK(std::abs(ep.lambda1 - closed) <= 1e-10 * closed);
    CHECK(ep.lambda1 == doctest::Approx(19.735).epsilon(1e-4));
    CHECK(std::abs(ep.lambda1 - 2 * pi * pi) <= 0.05);
    double sup = 0.0;
    for (double v : ep.phi1.values) {
        CHECK(v > 0.0);
        sup = std::max(sup, v);
    }
    CHECK(sup == doctest::Approx(1.0).epsilon(1e-14));
    // eigen relation for the returned vector
    const Field r = laplacian(ep.phi1, dom) + ep.lambda1 * ep.phi1;
    CHECK(l2_norm(r, dom) <= 1e-6 * ep.lambda1);
}

TEST_CASE("eigenvalue converges at second order to the continuum value") {
    auto errs = [](double a, double b) {
        const double exact = pi * pi * (1 / (a * a) + 1 / (b * b));
        std::vector<double> e;
        for (int n : {15, 31, 63}) {
            const RectDomain dom{a, b, n, 2 * n + 1};
            e.push_back(std::abs(principal_eigenvalue(dom).lambda1 - exact));
        }
        return e;
    };
    const std::vector<double> sq = errs(1.0, 1.0);
    const std::vector<double> rect = errs(1.0, 2.0);
    for (const auto& e : {sq, rect}) {
        CHECK(e[0] / e[1] == doctest::Approx(4.0).epsilon(0.02));
        CHECK(e[1] / e[2] == doctest::Approx(4.0).epsilon(0.02));
    }
    // 1×2 rectangle tends to π²(1 + 1/4)
    const double l = principal_eigenvalue(RectDomain{1.0, 2.0, 63, 127}).lambda1;
    CHECK(l == doctest::Approx(pi * pi * 1.25).epsilon(1e-3));
    CHECK(pi * pi * 1.25 == doctest::Approx(12.337).epsilon(1e-4));
}

TEST_CASE("norms") {
    const RectDomain dom = RectDomain::unit_square(31);
    const Field z(dom);
    CHECK(w_norm(z, base, dom) == 0.0);
    CHECK(lp_norm(z, 2.0, dom) == 0.0);
    const Field w = random_smooth_field(dom, 5);
    CHECK(w_norm(-3.0 * w, base, dom) == doctest::Approx(3.0 * w_norm(w, base, dom)).epsilon(1e-13));
    CHECK(lp_norm(-3.0 * w, 3.0, dom) == doctest::Approx(3.0 * lp_norm(w, 3.0, dom)).epsilon(1e-13));
    CHECK(w_norm(w, base, dom) == doctest::Approx(oracle::w_norm(w, base.q, dom)).epsilon(1e-12));
    CHECK(l2_norm(w, dom) == doctest::Approx(std::sqrt(inner(w, w, dom))).epsilon(1e-14));

    const EigenPair ep = principal_eigenvalue(dom, 1e-15);
    const double m = 1.0 / base.q;
    CHECK(w_norm(ep.phi1, base, dom) == doctest::Approx(ep.lambda1 * lp_norm(ep.phi1, m, dom)).epsilon(1e-8));
}

TEST_CASE("field size mismatches are rejected") {
    const RectDomain dom = RectDomain::unit_square(7);
    const Field wrong(8, 7);
    CHECK_THROWS_AS((void)laplacian(wrong, dom), DimensionMismatch);
    CHECK_THROWS_AS((void)w_norm(wrong, base, dom), DimensionMismatch);
    CHECK_THROWS_AS(RectDomain({1.0, 1.0, 2, 7}).require_valid(), DimensionMismatch);
    CHECK_THROWS_AS(RectDomain({-1.0, 1.0, 7, 7}).require_valid(), DimensionMismatch);
    CHECK_THROWS_AS(RectDomain({1.0, 1.0, 100000, 100000}).require_valid(), DimensionMismatch);
}

TEST_CASE("random smooth fields are deterministic and vanish nowhere identically") {
    const RectDomain dom = RectDomain::unit_square(15);
    const Field a = random_smooth_field(dom, 77);
    const Field b = random_smooth_field(dom, 77);
    const Field c = random_smooth_field(dom, 78);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(l2_norm(a, dom) > 0.0);
}

TEST_CASE("Sobolev constant estimate") {
    const RectDomain dom = RectDomain::unit_square(15);
    const double m = 3.0;
    SobolevOptions opt;
    opt.random_starts = 3;
    opt.iterations = 60;
    const SobolevEstimate est = sobolev_constant_estimate(dom, m, base, opt);
    // any single field is a lower bound for the supremum estimate
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const Field w = random_smooth_field(dom, seed);
        CHECK(sobolev_ratio(w, m, base, dom) <= est.value * (1 + 1e-12));
    }
    const EigenPair ep = principal_eigenvalue(dom);
    const double at_phi = std::pow(lp_norm(ep.phi1, m, dom) / w_norm(ep.phi1, base, dom), m + 1);
    CHECK(est.from_phi1 >= at_phi * (1 - 1e-12));
    CHECK(sobolev_ratio(ep.phi1, m, base, dom) == doctest::Approx(at_phi).epsilon(1e-12));
    for (std::size_t k = 1; k < est.per_start.size(); ++k) CHECK(est.per_start[k] >= est.per_start[k - 1]);
    CHECK(est.value == est.per_start.back());
    CHECK(sobolev_ratio(est.maximizer, m, base, dom) == doctest::Approx(est.value).epsilon(1e-10));
}
