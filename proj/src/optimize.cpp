#include "hamvar/optimize.hpp"

#include <cmath>
#include <vector>

namespace hamvar {

double dot(const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc;
}

double max_abs(const Field& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

void LbfgsMemory::push(const Field& s, const Field& y) {
    const double sy = dot(s, y);
    const double ss = dot(s, s);
    const double yy = dot(y, y);
    if (!(sy > 1e-12 * std::sqrt(ss * yy))) return;
    pairs_.push_back({s, y, 1.0 / sy});
    if (static_cast<int>(pairs_.size()) > size_) pairs_.pop_front();
}

Field LbfgsMemory::apply(const Field& g, const Field& d) const {
    Field q = g;
    std::vector<double> alpha(pairs_.size());
    for (std::size_t i = pairs_.size(); i-- > 0;) {
        const Pair& p = pairs_[i];
        alpha[i] = p.rho * dot(p.s, q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * p.y[k];
    }
    double gamma = 1.0;
    if (!pairs_.empty()) {
        const Pair& last = pairs_.back();
        double ydy = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) ydy += last.y[k] * d[k] * last.y[k];
        gamma = 1.0 / (last.rho * ydy);
    }
    for (std::size_t k = 0; k < q.size(); ++k) q[k] *= gamma * d[k];
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const Pair& p = pairs_[i];
        const double beta = p.rho * dot(p.y, q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] += (alpha[i] - beta) * p.s[k];
    }
    return q;
}

namespace {

Field scaled_step(const Field& x, const Field& dir, double alpha) {
    Field t = x;
    for (std::size_t k = 0; k < t.size(); ++k) t[k] += alpha * dir[k];
    return t;
}

}  // namespace

DescentResult lbfgs_minimize(const Evaluator& eval, Field x0, const DescentOptions& opt,
                             const StepHook& hook) {
    DescentResult res;
    res.point = eval(std::move(x0));
    LbfgsMemory mem(opt.memory);
    DescentPoint& cur = res.point;

    for (int it = 0; it < opt.max_iter; ++it) {
        if (cur.measure <= cur.target) {
            res.converged = true;
            return res;
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) {
                if (mem.empty()) break;
                mem.clear();
            }
            Field dir = mem.apply(cur.grad, cur.precond);
            dir *= -1.0;
            double slope = dot(cur.grad, dir);
            if (!(slope < 0.0)) {
                mem.clear();
                dir = cur.grad;
                for (std::size_t k = 0; k < dir.size(); ++k) dir[k] *= -cur.precond[k];
                slope = dot(cur.grad, dir);
                if (!(slope < 0.0)) break;
            }
            double alpha = 1.0;
            if (opt.max_rel_step > 0.0) {
                const double xm = max_abs(cur.x);
                const double dm = max_abs(dir);
                if (xm > 0.0 && dm > opt.max_rel_step * xm) alpha = opt.max_rel_step * xm / dm;
            }
            for (int bt = 0; bt < opt.max_backtracks; ++bt, alpha *= opt.shrink) {
                DescentPoint trial = eval(scaled_step(cur.x, dir, alpha));
                if (!std::isfinite(trial.value)) continue;
                const bool armijo = trial.value <= cur.value + opt.armijo * alpha * slope;
                // at the round-off floor of the energy, accept steps that still
                // reduce the stopping measure
                const bool flat = trial.value <= cur.value + 1e-13 * cur.scale &&
                                  trial.measure < cur.measure;
                if (armijo || flat) {
                    Field s = trial.x - cur.x;
                    Field y = trial.grad - cur.grad;
                    mem.push(s, y);
                    cur = std::move(trial);
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) {
            res.iterations = it;
            res.converged = cur.measure <= cur.target;
            return res;
        }
        res.iterations = it + 1;
        if (hook) hook(cur, res.iterations);
    }
    res.converged = cur.measure <= cur.target;
    return res;
}

}  // namespace hamvar
