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

#ifndef DECPOS_ACCELERATION_HPP
#define DECPOS_ACCELERATION_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace decpos {

// Convergence-acceleration schemes for cross-entropy policy search. The
// baseline (NoAcceleration) uses the configured learning rate unchanged;
// the other three modify the per-iteration update.

struct NoAcceleration {};

/// Dynamically decaying learning rate: alpha_k = alpha0 - alpha0(1 - 1/k)^beta.
struct DynamicSmoothing {
    double alpha0 = 0.5;
    double beta = 15.0;
};

/// Linearly decreasing additive noise: omega_k = max(omega_max - rate*k, 0),
/// applied to every component of every sampling distribution and
/// renormalized.
struct NoiseInjection {
    double omega_max = 0.02;
    double rate = 1.0 / 2000.0;
};

/// Maximal entropy injection: once the best value has converged, every
/// sampling distribution whose entropy falls below tau_h times its maximum
/// is mixed with the uniform distribution at rate alpha_ei.
struct MaxEntropyInjection {
    double alpha_ei = 0.03;
    double tau_h = 0.1;
};

using AccelerationScheme = std::variant<NoAcceleration, DynamicSmoothing,
                                        NoiseInjection, MaxEntropyInjection>;

inline void validate(const AccelerationScheme& scheme) {
    if (const auto* d = std::get_if<DynamicSmoothing>(&scheme)) {
        if (!(d->alpha0 > 0.0 && d->alpha0 <= 1.0))
            throw std::invalid_argument("dynamic-smoothing: alpha0 must be in (0,1]");
        if (!(d->beta > 0.0))
            throw std::invalid_argument("dynamic-smoothing: beta must be > 0");
    } else if (const auto* n = std::get_if<NoiseInjection>(&scheme)) {
        if (n->omega_max < 0.0)
            throw std::invalid_argument("noise-injection: omega_max must be >= 0");
        if (n->rate < 0.0)
            throw std::invalid_argument("noise-injection: rate must be >= 0");
    } else if (const auto* e = std::get_if<MaxEntropyInjection>(&scheme)) {
        if (!(e->alpha_ei > 0.0 && e->alpha_ei < 1.0))
            throw std::invalid_argument(
                "max-entropy-injection: alpha_ei must be in (0,1)");
        if (!(e->tau_h > 0.0 && e->tau_h < 1.0))
            throw std::invalid_argument(
                "max-entropy-injection: tau_h must be in (0,1)");
    }
}

inline std::string scheme_name(const AccelerationScheme& scheme) {
    if (std::holds_alternative<DynamicSmoothing>(scheme)) return "dynamic-smoothing";
    if (std::holds_alternative<NoiseInjection>(scheme)) return "noise-injection";
    if (std::holds_alternative<MaxEntropyInjection>(scheme))
        return "max-entropy-injection";
    return "none";
}

/// Dynamically smoothed learning rate for iteration k >= 1.
inline double dynamic_alpha(long k, double alpha0, double beta) {
    if (k < 1) throw std::invalid_argument("dynamic_alpha: k must be >= 1");
    const double base = 1.0 - 1.0 / static_cast<double>(k);
    return alpha0 - alpha0 * std::pow(base, beta);
}

/// Noise level for iteration k >= 0.
inline double linear_noise(long k, double omega_max, double rate) {
    return std::max(omega_max - rate * static_cast<double>(k), 0.0);
}

}  // namespace decpos

#endif
