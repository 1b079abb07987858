// Copyright 2026 The decpos Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECPOS_BFGS_HPP
#define DECPOS_BFGS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

namespace decpos {

struct BfgsOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;  // infinity norm of the gradient
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Unconstrained minimization by the Broyden-Fletcher-Goldfarb-Shanno method
/// with a dense inverse-Hessian approximation and Armijo backtracking line
/// search. `f(x, grad)` must return the objective value and fill `grad`.
/// Fully deterministic: identical inputs give identical iterates.
template <typename F>
BfgsResult minimize_bfgs(F&& f, Eigen::VectorXd x0,
                         const BfgsOptions& opts = {}) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 50;

    const Eigen::Index n = x0.size();
    BfgsResult result;
    result.x = std::move(x0);
    VectorXd grad(n), grad_new(n), p(n), s(n), y(n), hy(n);
    VectorXd x_trial(n);
    MatrixXd h = MatrixXd::Identity(n, n);
    result.value = f(result.x, grad);

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) {
            result.converged = true;
            break;
        }
        result.iterations = it + 1;

        p.noalias() = -(h * grad);
        double slope = grad.dot(p);
        if (!(slope < 0.0)) {
            // Numerical breakdown of the approximation; restart from
            // steepest descent.
            h.setIdentity();
            p = -grad;
            slope = grad.dot(p);
            if (!(slope < 0.0)) break;  // gradient is zero or non-finite
        }

        double step = 1.0;
        double trial_value = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            x_trial = result.x + step * p;
            trial_value = f(x_trial, grad_new);
            if (std::isfinite(trial_value) &&
                trial_value <= result.value + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no acceptable step along this direction

        s = x_trial - result.x;
        y = grad_new - grad;
        result.x = x_trial;
        result.value = trial_value;
        grad.swap(grad_new);

        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double rho = 1.0 / sy;
            hy.noalias() = h * y;
            const double yhy = y.dot(hy);
            h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
            h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
        }
        // Steps violating the curvature condition leave the approximation
        // unchanged.
    }
    return result;
}

/// Limited-memory variant of `minimize_bfgs` for high-dimensional problems:
/// the inverse Hessian is represented implicitly by the last `memory`
/// curvature pairs (two-loop recursion), so one iteration costs
/// O(memory * n) instead of O(n^2). The line search brackets a weak-Wolfe
/// point (sufficient decrease plus a curvature condition), which keeps every
/// stored pair positively curved; an Armijo-only point is used as a
/// fallback when the bracket collapses. Same stopping rule and determinism
/// guarantees as the dense method.
template <typename F>
BfgsResult minimize_lbfgs(F&& f, Eigen::VectorXd x0,
                          const BfgsOptions& opts = {}, int memory = 10) {
    using Eigen::VectorXd;
    constexpr double kArmijo = 1e-4;
    constexpr double kCurvature = 0.9;
    constexpr int kMaxLineTrials = 60;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    const Eigen::Index n = x0.size();
    BfgsResult result;
    result.x = std::move(x0);
    VectorXd grad(n), grad_new(n), p(n), x_trial(n);
    std::vector<VectorXd> s_hist, y_hist;
    std::vector<double> rho_hist;
    double h0_scale = 1.0;  // initial inverse-Hessian diagonal
    result.value = f(result.x, grad);

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) {
            result.converged = true;
            break;
        }
        result.iterations = it + 1;

        // Two-loop recursion: p = -H grad from the stored pairs.
        p = -grad;
        const int k = static_cast<int>(s_hist.size());
        std::vector<double> alpha(k);
        for (int i = k - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(p);
            p.noalias() -= alpha[i] * y_hist[i];
        }
        p *= h0_scale;
        for (int i = 0; i < k; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(p);
            p.noalias() += (alpha[i] - beta) * s_hist[i];
        }

        double slope = grad.dot(p);
        if (!(slope < 0.0)) {
            // Breakdown: drop the history and restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            h0_scale = 1.0;
            p = -grad;
            slope = grad.dot(p);
            if (!(slope < 0.0)) break;  // gradient is zero or non-finite
        }

        // Bisection bracketing for the weak Wolfe conditions. Armijo
        // failures shrink from above, curvature failures expand from below;
        // the best Armijo-only point seen is kept as a fallback.
        double lo = 0.0, hi = kInf, step = 1.0;
        double trial_value = 0.0;
        double fallback_step = 0.0, fallback_value = 0.0;
        VectorXd fallback_grad;
        bool wolfe = false;
        for (int lt = 0; lt < kMaxLineTrials; ++lt) {
            x_trial = result.x + step * p;
            trial_value = f(x_trial, grad_new);
            if (!std::isfinite(trial_value) ||
                trial_value > result.value + kArmijo * step * slope) {
                hi = step;
            } else if (grad_new.dot(p) < kCurvature * slope) {
                lo = step;
                fallback_step = step;
                fallback_value = trial_value;
                fallback_grad = grad_new;
            } else {
                wolfe = true;
                break;
            }
            step = hi < kInf ? 0.5 * (lo + hi) : 2.0 * lo;
            if (!(step > 0.0) || !std::isfinite(step)) break;
        }
        if (!wolfe) {
            if (fallback_step <= 0.0) break;  // no progress possible
            step = fallback_step;
            x_trial = result.x + step * p;
            trial_value = fallback_value;
            grad_new = fallback_grad;
        }

        VectorXd s = x_trial - result.x;
        VectorXd y = grad_new - grad;
        result.x = x_trial;
        result.value = trial_value;
        grad.swap(grad_new);

        const double sy = s.dot(y);
        if (sy > 1e-12) {
            h0_scale = sy / y.squaredNorm();
            if (static_cast<int>(s_hist.size()) == memory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
            rho_hist.push_back(1.0 / sy);
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
        }
        // Pairs violating the curvature condition are skipped.
    }
    return result;
}

}  // namespace decpos

#endif
