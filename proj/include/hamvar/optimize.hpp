#pragma once

// Limited-memory BFGS descent with a diagonal initial inverse Hessian and
// Armijo backtracking. Only first derivatives are used.

#include <deque>
#include <functional>

#include "hamvar/grid.hpp"

namespace hamvar {

struct DescentPoint {
    Field x;
    double value = 0.0;
    double scale = 1.0;   // magnitude of the summands of `value` (round-off level)
    Field grad;           // Euclidean gradient of `value` at x
    Field precond;        // positive diagonal used as initial inverse Hessian
    double measure = 0.0; // stopping quantity
    double target = 0.0;  // converged once measure <= target
};

/// Evaluates a trial point. It may move the point (projection, rescaling);
/// the returned DescentPoint must describe the point actually taken.
using Evaluator = std::function<DescentPoint(Field)>;
/// Called after each accepted step with the iteration count; may throw to abort.
using StepHook = std::function<void(const DescentPoint&, int)>;

struct DescentOptions {
    int memory = 10;
    int max_iter = 5000;
    double armijo = 1e-4;
    double shrink = 0.5;
    int max_backtracks = 50;
    /// Trial steps are capped at this multiple of ‖x‖_∞ (0 disables).
    double max_rel_step = 1.0;
};

struct DescentResult {
    DescentPoint point;
    int iterations = 0;
    bool converged = false;
};

class LbfgsMemory {
public:
    explicit LbfgsMemory(int size) : size_(size) {}

    /// Stores (s, y) when the curvature s·y is safely positive.
    void push(const Field& s, const Field& y);
    void clear() { pairs_.clear(); }
    [[nodiscard]] bool empty() const { return pairs_.empty(); }
    /// H·g by the two-loop recursion with H0 = γ·diag(d).
    [[nodiscard]] Field apply(const Field& g, const Field& d) const;

private:
    struct Pair {
        Field s;
        Field y;
        double rho;
    };
    int size_;
    std::deque<Pair> pairs_;
};

[[nodiscard]] double dot(const Field& a, const Field& b);
[[nodiscard]] double max_abs(const Field& a);

[[nodiscard]] DescentResult lbfgs_minimize(const Evaluator& eval, Field x0,
                                           const DescentOptions& opt,
                                           const StepHook& hook = {});

}  // namespace hamvar
