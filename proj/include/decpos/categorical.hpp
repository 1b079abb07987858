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

#ifndef DECPOS_CATEGORICAL_HPP
#define DECPOS_CATEGORICAL_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "decpos/rng.hpp"

namespace decpos {

/// A categorical sampling distribution: the parameter vector of one
/// macro-action or node-transition distribution. Entries lie in [0, 1] and
/// sum to 1 within a small tolerance.
struct CategoricalParams {
    std::vector<double> probs;

    CategoricalParams() = default;
    explicit CategoricalParams(std::vector<double> p) : probs(std::move(p)) {}

    std::size_t size() const { return probs.size(); }
    double operator[](std::size_t i) const { return probs[i]; }
};

inline constexpr double kSimplexTolerance = 1e-9;

inline bool is_valid_simplex(const CategoricalParams& params,
                             double tol = kSimplexTolerance) {
    if (params.probs.empty()) return false;
    double sum = 0.0;
    for (double p : params.probs) {
        if (!(p >= 0.0 && p <= 1.0 + tol)) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= tol;
}

inline CategoricalParams uniform_categorical(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_categorical: n must be >= 1");
    return CategoricalParams(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

inline CategoricalParams point_mass(std::size_t n, std::size_t index) {
    if (index >= n) throw std::invalid_argument("point_mass: index out of range");
    std::vector<double> p(n, 0.0);
    p[index] = 1.0;
    return CategoricalParams(std::move(p));
}

/// Maximum likelihood estimate from event counts: probs[i] = counts[i]/total.
/// Throws when all counts are zero; callers then retain their previous
/// parameters.
inline CategoricalParams mle_categorical(std::span<const int> counts) {
    if (counts.empty())
        throw std::invalid_argument("mle_categorical: empty counts");
    long long total = 0;
    for (int c : counts) {
        if (c < 0) throw std::invalid_argument("mle_categorical: negative count");
        total += c;
    }
    if (total == 0)
        throw std::invalid_argument("mle_categorical: all counts are zero");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return CategoricalParams(std::move(p));
}

/// Smoothed parameter update: alpha * theta_new + (1 - alpha) * theta_old.
inline CategoricalParams smooth_update(const CategoricalParams& theta_new,
                                       const CategoricalParams& theta_old,
                                       double alpha) {
    if (theta_new.size() != theta_old.size())
        throw std::invalid_argument("smooth_update: length mismatch");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("smooth_update: alpha must be in (0,1]");
    std::vector<double> p(theta_new.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = alpha * theta_new.probs[i] + (1.0 - alpha) * theta_old.probs[i];
    return CategoricalParams(std::move(p));
}

/// Shannon entropy in nats, with 0 * ln 0 := 0. Probabilities below 1e-12
/// are treated as zero.
inline double entropy(const CategoricalParams& params) {
    double h = 0.0;
    for (double p : params.probs)
        if (p >= 1e-12) h -= p * std::log(p);
    return h;
}

/// Smoothed update mixed with the discrete uniform maximal-entropy
/// distribution at rate alpha_ei:
///   (1 - alpha_ei) * [alpha * theta_new + (1 - alpha) * theta_old]
///     + alpha_ei * uniform.
inline CategoricalParams inject_max_entropy(const CategoricalParams& theta_new,
                                            const CategoricalParams& theta_old,
                                            double alpha, double alpha_ei) {
    CategoricalParams smoothed = smooth_update(theta_new, theta_old, alpha);
    const double u = 1.0 / static_cast<double>(smoothed.size());
    for (double& p : smoothed.probs)
        p = (1.0 - alpha_ei) * p + alpha_ei * u;
    return smoothed;
}

/// Adds omega to every component and renormalizes to the simplex.
inline CategoricalParams add_noise(const CategoricalParams& params,
                                   double omega) {
    if (omega < 0.0) throw std::invalid_argument("add_noise: omega must be >= 0");
    const double total = 1.0 + omega * static_cast<double>(params.size());
    std::vector<double> p(params.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = (params.probs[i] + omega) / total;
    return CategoricalParams(std::move(p));
}

/// Draws an index i with probability probs[i].
inline int sample(const CategoricalParams& params, RngStream& rng) {
    const double u = rng.next_canonical();
    double cum = 0.0;
    const std::size_t n = params.size();
    for (std::size_t i = 0; i < n; ++i) {
        cum += params.probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    // Rounding may leave cum marginally below 1; fall back to the last
    // index with nonzero mass.
    for (std::size_t i = n; i-- > 0;)
        if (params.probs[i] > 0.0) return static_cast<int>(i);
    return static_cast<int>(n - 1);
}

}  // namespace decpos

#endif
