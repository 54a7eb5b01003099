#pragma once

// Finite-difference discretization of a rectangle [0,a]x[0,b]: interior nodes
// only, row-major (index j*nx + i, i along x), zero Dirichlet extension.
// Navier conditions for the fourth-order problem follow from applying the
// five-point Laplacian twice, each time to a zero-extended field.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hamvar/nonlinearity.hpp"

namespace hamvar {

inline constexpr std::size_t kMaxGridNodes = std::size_t{1} << 20;

struct RectDomain {
    double a = 1.0;
    double b = 1.0;
    int nx = 63;
    int ny = 63;

    [[nodiscard]] double hx() const { return a / (nx + 1); }
    [[nodiscard]] double hy() const { return b / (ny + 1); }
    /// Quadrature weight of every interior node.
    [[nodiscard]] double cell() const { return hx() * hy(); }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    [[nodiscard]] double x(int i) const { return (i + 1) * hx(); }
    [[nodiscard]] double y(int j) const { return (j + 1) * hy(); }

    /// Throws DimensionMismatch for non-positive sides, nx or ny < 3, or more
    /// than kMaxGridNodes nodes.
    void require_valid() const;

    /// Unit square with n interior nodes per side.
    static RectDomain unit_square(int n) { return {1.0, 1.0, n, n}; }
};

struct Field {
    int nx = 0;
    int ny = 0;
    std::vector<double> values;

    Field() = default;
    Field(int nx_, int ny_, double fill = 0.0)
        : nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * ny_, fill) {}
    explicit Field(const RectDomain& dom, double fill = 0.0) : Field(dom.nx, dom.ny, fill) {}

    [[nodiscard]] std::size_t size() const { return values.size(); }
    double& operator[](std::size_t k) { return values[k]; }
    double operator[](std::size_t k) const { return values[k]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
    [[nodiscard]] double at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * nx + i];
    }
    [[nodiscard]] bool matches(const RectDomain& dom) const {
        return nx == dom.nx && ny == dom.ny && values.size() == dom.size();
    }
    [[nodiscard]] bool all_finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double t);
    friend Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
    friend Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
    friend Field operator*(double t, Field f) { return f *= t; }
};

/// Throws DimensionMismatch unless `w` lives on `dom`.
void require_match(const Field& w, const RectDomain& dom, const char* what);

/// Five-point Laplacian with zero Dirichlet extension.
[[nodiscard]] Field laplacian(const Field& w, const RectDomain& dom);

/// Exact inverse of the five-point Laplacian through a dense type-I sine
/// transform, diagonal in the discrete Dirichlet eigenbasis.
class PoissonSolver {
public:
    explicit PoissonSolver(const RectDomain& dom);

    /// Returns w with laplacian(w) = rhs.
    [[nodiscard]] Field solve(const Field& rhs) const;
    /// Smallest eigenvalue of -Δ_h in closed form.
    [[nodiscard]] double lowest_eigenvalue() const { return eig_.front(); }
    [[nodiscard]] const RectDomain& domain() const { return dom_; }

private:
    void transform(std::span<const double> in, std::span<double> out) const;

    RectDomain dom_;
    std::vector<double> sx_;   // nx*nx sine table
    std::vector<double> sy_;   // ny*ny sine table
    std::vector<double> eig_;  // eigenvalues of -Δ_h, row-major (l*nx + k)
};

/// (4/hx²)sin²(π hx/2a) + (4/hy²)sin²(π hy/2b).
[[nodiscard]] double fd_principal_eigenvalue(const RectDomain& dom);

struct EigenPair {
    double lambda1 = 0.0;
    Field phi1;  // sup-norm 1, positive
    int iterations = 0;
};

/// Inverse power iteration; stops when successive Rayleigh quotients differ by
/// at most tol relative. Throws NonConvergence after max_iter sweeps.
[[nodiscard]] EigenPair principal_eigenvalue(const RectDomain& dom, double tol = 1e-10,
                                             int max_iter = 1000);

/// Discrete inner product Σ hx hy u v.
[[nodiscard]] double inner(const Field& u, const Field& v, const RectDomain& dom);
/// (Σ hx hy |w|^{m+1})^{1/(m+1)}.
[[nodiscard]] double lp_norm(const Field& w, double m, const RectDomain& dom);
/// Discrete L² norm.
[[nodiscard]] double l2_norm(const Field& w, const RectDomain& dom);
/// ‖w‖_W = ‖Δ_h w‖ in L^{(q+1)/q}.
[[nodiscard]] double w_norm(const Field& w, const Exponents& exps, const RectDomain& dom);
/// ‖θ‖ in L^{(q+1)/q} for a field already holding Δ_h w.
[[nodiscard]] double w_norm_of_laplacian(const Field& theta, const Exponents& exps,
                                         const RectDomain& dom);

/// Nodal samples of f(x,y).
template <class F>
[[nodiscard]] Field sample(const RectDomain& dom, F&& f) {
    Field w(dom);
    for (int j = 0; j < dom.ny; ++j) {
        for (int i = 0; i < dom.nx; ++i) {
            w.at(i, j) = f(dom.x(i), dom.y(j));
        }
    }
    return w;
}

/// Random smooth field: sine series over the lowest `modes`² modes with
/// N(0,1) coefficients damped by 1/(k²+l²). Deterministic in `seed`.
[[nodiscard]] Field random_smooth_field(const RectDomain& dom, std::uint64_t seed,
                                        int modes = 6);

/// Ratio ‖w‖_{L^{m+1}}^{m+1} / ‖w‖_W^{m+1}; 0 for w = 0.
[[nodiscard]] double sobolev_ratio(const Field& w, double m, const Exponents& exps,
                                   const RectDomain& dom);

struct SobolevOptions {
    int random_starts = 4;
    int iterations = 150;
    std::uint64_t seed = 12345;
};

struct SobolevEstimate {
    double value = 0.0;             // running maximum over all starts
    double from_phi1 = 0.0;         // best value reached from the φ₁ start
    std::vector<double> per_start;  // running maximum after each start
    Field maximizer;
};

/// Lower bound for the discrete S_{q,m} = sup ‖w‖_{L^{m+1}}^{m+1}/‖w‖_W^{m+1}
/// by normalized gradient ascent from φ₁ and `random_starts` random fields.
[[nodiscard]] SobolevEstimate sobolev_constant_estimate(const RectDomain& dom, double m,
                                                        const Exponents& exps,
                                                        const SobolevOptions& opt = {});

}  // namespace hamvar
