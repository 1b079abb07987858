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

#ifndef DECPOS_KLR_HPP
#define DECPOS_KLR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "decpos/bfgs.hpp"
#include "decpos/categorical.hpp"
#include "decpos/kernel.hpp"
#include "decpos/kernel_queue.hpp"

namespace decpos {

/// Kernel logistic regression over one FSA node's continuous observations:
/// class c (= next node) receives probability softmax_c(weights.row(c) ·
/// feature_vector(o)). An untrained function (empty basis, zero weights)
/// predicts the uniform distribution.
///
/// `mixture` is the accumulated uniform-injection coefficient: predictions
/// are (1 - mixture) * softmax + mixture * uniform. It starts at 0 and
/// composes multiplicatively under repeated injection; retraining resets it.
class KernelTransitionFunction {
  public:
    KernelTransitionFunction() = default;

    /// Untrained function over `num_classes` next nodes.
    KernelTransitionFunction(int num_classes, double sigma)
        : num_classes_(num_classes), sigma_(sigma) {
        check_invariants();
        weights_ = Eigen::MatrixXd::Zero(num_classes_, 1);
    }

    KernelTransitionFunction(int num_classes, double sigma,
                             std::vector<std::vector<double>> basis,
                             Eigen::MatrixXd weights, double mixture = 0.0)
        : num_classes_(num_classes),
          sigma_(sigma),
          basis_(std::move(basis)),
          weights_(std::move(weights)),
          mixture_(mixture) {
        check_invariants();
        if (weights_.rows() != num_classes_ ||
            weights_.cols() != static_cast<Eigen::Index>(basis_.size()) + 1)
            throw std::invalid_argument(
                "KernelTransitionFunction: weights must be num_classes x "
                "(|basis|+1)");
        if (!(mixture_ >= 0.0 && mixture_ <= 1.0))
            throw std::invalid_argument(
                "KernelTransitionFunction: mixture must be in [0,1]");
    }

    int num_classes() const { return num_classes_; }
    double sigma() const { return sigma_; }
    double mixture() const { return mixture_; }
    const std::vector<std::vector<double>>& basis() const { return basis_; }
    const Eigen::MatrixXd& weights() const { return weights_; }

    /// Provenance keys of the basis points, parallel to basis(): (bundle
    /// iteration, index within bundle). Used to warm-start retraining; not
    /// part of the serialized policy.
    const std::vector<std::pair<long, int>>& basis_keys() const {
        return basis_keys_;
    }
    void set_basis_keys(std::vector<std::pair<long, int>> keys) {
        if (!keys.empty() && keys.size() != basis_.size())
            throw std::invalid_argument(
                "KernelTransitionFunction: keys must match basis size");
        basis_keys_ = std::move(keys);
    }

    CategoricalParams predict(std::span<const double> o) const {
        std::vector<double> p(num_classes_);
        if (basis_.empty()) {
            const double u = 1.0 / num_classes_;
            for (double& v : p) v = u;
            return CategoricalParams(std::move(p));
        }
        const std::vector<double> phi = feature_vector(o, basis_, sigma_);
        Eigen::Map<const Eigen::VectorXd> phi_vec(phi.data(), phi.size());
        Eigen::VectorXd scores = weights_ * phi_vec;
        const double top = scores.maxCoeff();
        double total = 0.0;
        for (int c = 0; c < num_classes_; ++c) {
            p[c] = std::exp(scores[c] - top);
            total += p[c];
        }
        const double u = mixture_ / num_classes_;
        for (double& v : p) v = (1.0 - mixture_) * (v / total) + u;
        return CategoricalParams(std::move(p));
    }

    /// Returns a copy whose predictions are mixed with uniform at rate
    /// alpha_ei on top of any existing mixture.
    KernelTransitionFunction injected(double alpha_ei) const {
        KernelTransitionFunction out = *this;
        out.mixture_ = mixture_ + alpha_ei * (1.0 - mixture_);
        return out;
    }

  private:
    void check_invariants() const {
        if (num_classes_ < 1)
            throw std::invalid_argument(
                "KernelTransitionFunction: num_classes must be >= 1");
        if (!(sigma_ > 0.0))
            throw std::invalid_argument(
                "KernelTransitionFunction: sigma must be > 0");
    }

    int num_classes_ = 1;
    double sigma_ = 1.0;
    std::vector<std::vector<double>> basis_;
    Eigen::MatrixXd weights_;
    double mixture_ = 0.0;
    std::vector<std::pair<long, int>> basis_keys_;
};

inline CategoricalParams klr_predict(const KernelTransitionFunction& fn,
                                     std::span<const double> o) {
    return fn.predict(o);
}

/// Mean prediction entropy over the function's own kernel basis points; the
/// degeneracy measure for transition functions. ln(num_classes) when the
/// basis is empty (uniform predictions everywhere).
inline double approx_transition_entropy(const KernelTransitionFunction& fn) {
    if (fn.basis().empty())
        return std::log(static_cast<double>(fn.num_classes()));
    double total = 0.0;
    for (const auto& b : fn.basis()) total += entropy(fn.predict(b));
    return total / static_cast<double>(fn.basis().size());
}

/// Continuous analogue of the maximal-entropy injection update: mixes every
/// prediction with the uniform distribution at rate alpha_ei.
inline KernelTransitionFunction inject_transition_entropy(
    const KernelTransitionFunction& fn, double alpha_ei) {
    if (!(alpha_ei > 0.0 && alpha_ei < 1.0))
        throw std::invalid_argument(
            "inject_transition_entropy: alpha_ei must be in (0,1)");
    return fn.injected(alpha_ei);
}

struct KlrObjective {
    double value = 0.0;        // weighted log-likelihood minus L2 penalty
    Eigen::MatrixXd gradient;  // same shape as the weight matrix
};

namespace detail {

/// Objective and gradient given a precomputed feature matrix
/// (rows = samples, cols = |basis|+1 with trailing bias).
inline KlrObjective klr_objective_features(
    const Eigen::MatrixXd& weights, const Eigen::MatrixXd& features,
    const std::vector<int>& labels, const std::vector<double>& sample_weights,
    double lambda) {
    const Eigen::Index n = features.rows();
    const Eigen::Index classes = weights.rows();
    KlrObjective out;

    Eigen::MatrixXd scores = features * weights.transpose();  // n x classes
    Eigen::MatrixXd resid(n, classes);
    double value = 0.0;
    for (Eigen::Index b = 0; b < n; ++b) {
        const double top = scores.row(b).maxCoeff();
        double total = 0.0;
        for (Eigen::Index c = 0; c < classes; ++c)
            total += std::exp(scores(b, c) - top);
        const double log_norm = top + std::log(total);
        const double w = sample_weights[b];
        value += w * (scores(b, labels[b]) - log_norm);
        for (Eigen::Index c = 0; c < classes; ++c) {
            const double p = std::exp(scores(b, c) - log_norm);
            resid(b, c) = w * ((labels[b] == c ? 1.0 : 0.0) - p);
        }
    }
    out.gradient.noalias() = resid.transpose() * features;
    if (lambda > 0.0) {
        // The bias column (last) is excluded from the penalty.
        const Eigen::Index m = weights.cols() - 1;
        value -= 0.5 * lambda * weights.leftCols(m).squaredNorm();
        out.gradient.leftCols(m) -= lambda * weights.leftCols(m);
    }
    out.value = value;
    return out;
}

}  // namespace detail

/// Weighted multi-class log-likelihood of the kernelized classifier and its
/// exact gradient:
///   l(W) = sum_b w_b * log softmax_{y_b}(W phi_b) - lambda/2 ||W_nobias||^2
/// with phi_b = feature_vector(o_b, basis, sigma).
inline KlrObjective klr_objective_and_gradient(
    const Eigen::MatrixXd& weights,
    const std::vector<std::vector<double>>& observations,
    const std::vector<int>& labels, const std::vector<double>& sample_weights,
    double lambda, const std::vector<std::vector<double>>& basis,
    double sigma) {
    if (observations.size() != labels.size() ||
        observations.size() != sample_weights.size())
        throw std::invalid_argument(
            "klr_objective_and_gradient: input lists must have equal length");
    if (lambda < 0.0)
        throw std::invalid_argument(
            "klr_objective_and_gradient: lambda must be >= 0");
    for (double w : sample_weights)
        if (w < 0.0)
            throw std::invalid_argument(
                "klr_objective_and_gradient: negative sample weight");
    const Eigen::Index n = static_cast<Eigen::Index>(observations.size());
    Eigen::MatrixXd features(n, static_cast<Eigen::Index>(basis.size()) + 1);
    for (Eigen::Index b = 0; b < n; ++b) {
        const std::vector<double> phi =
            feature_vector(observations[b], basis, sigma);
        for (std::size_t j = 0; j < phi.size(); ++j)
            features(b, static_cast<Eigen::Index>(j)) = phi[j];
    }
    return detail::klr_objective_features(weights, features, labels,
                                          sample_weights, lambda);
}

/// Fits one node's transition function from the robot's kernel queue.
///
/// The basis is every observation recorded for `node` across the queued
/// bundles; each sample is weighted by its bundle's weight (oldest bundle
/// first). The regularized weighted log-likelihood is maximized by BFGS,
/// warm-started from `previous` where basis points carry over. A node with
/// no queued samples gets an untrained function (uniform predictions).
inline KernelTransitionFunction train_weighted_klr(
    const FifoKernelQueue& queue, int node, int num_classes, double alpha,
    double sigma, double lambda,
    const KernelTransitionFunction* previous = nullptr) {
    if (num_classes < 1)
        throw std::invalid_argument(
            "train_weighted_klr: num_classes must be >= 1");

    std::vector<std::vector<double>> observations;
    std::vector<std::pair<long, int>> keys;
    std::vector<int> labels;
    std::vector<double> weights;
    if (queue.size() > 0) {
        const std::vector<double> bw = bundle_weights(queue.size(), alpha);
        for (int b = 0; b < queue.size(); ++b) {
            const ObservationBundle& bundle = queue.bundle(b);
            for (std::size_t j = 0; j < bundle.samples.size(); ++j) {
                const TransitionSample& s = bundle.samples[j];
                if (s.node != node) continue;
                if (s.next_node < 0 || s.next_node >= num_classes)
                    throw std::invalid_argument(
                        "train_weighted_klr: next_node out of range");
                observations.push_back(s.observation);
                keys.emplace_back(bundle.iteration, static_cast<int>(j));
                labels.push_back(s.next_node);
                weights.push_back(bw[b]);
            }
        }
    }
    if (observations.empty())
        return KernelTransitionFunction(num_classes, sigma);

    const Eigen::Index m = static_cast<Eigen::Index>(observations.size());
    const Eigen::Index cols = m + 1;
    Eigen::MatrixXd features(m, cols);
    for (Eigen::Index b = 0; b < m; ++b) {
        for (Eigen::Index j = 0; j < m; ++j)
            features(b, j) =
                rbf_kernel(observations[b], observations[j], sigma);
        features(b, m) = 1.0;
    }

    Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(num_classes, cols);
    if (previous != nullptr && !previous->basis_keys().empty() &&
        previous->num_classes() == num_classes) {
        const auto& prev_keys = previous->basis_keys();
        const auto& prev_w = previous->weights();
        for (Eigen::Index j = 0; j < m; ++j) {
            for (std::size_t pj = 0; pj < prev_keys.size(); ++pj) {
                if (prev_keys[pj] == keys[j]) {
                    w0.col(j) = prev_w.col(static_cast<Eigen::Index>(pj));
                    break;
                }
            }
        }
        w0.col(m) = prev_w.col(prev_w.cols() - 1);  // bias carries over
    }

    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        Eigen::Map<const Eigen::MatrixXd> w(x.data(), num_classes, cols);
        const KlrObjective o = detail::klr_objective_features(
            w, features, labels, weights, lambda);
        grad = -Eigen::Map<const Eigen::VectorXd>(o.gradient.data(),
                                                  o.gradient.size());
        return -o.value;
    };
    Eigen::VectorXd x0 =
        Eigen::Map<const Eigen::VectorXd>(w0.data(), w0.size());
    // The parameter count is num_classes * (m + 1) and routinely reaches a
    // few thousand; the limited-memory update keeps each quasi-Newton
    // iteration linear in that size.
    const BfgsResult fit = minimize_lbfgs(objective, std::move(x0));

    Eigen::MatrixXd trained =
        Eigen::Map<const Eigen::MatrixXd>(fit.x.data(), num_classes, cols);
    KernelTransitionFunction fn(num_classes, sigma, std::move(observations),
                                std::move(trained));
    fn.set_basis_keys(std::move(keys));
    return fn;
}

}  // namespace decpos

#endif
