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

#ifndef DECPOS_KERNEL_HPP
#define DECPOS_KERNEL_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace decpos {

/// Radial basis function kernel exp(-0.5 * ||o - o'||^2 / sigma^2), where
/// sigma is the kernel radius in observation units.
inline double rbf_kernel(std::span<const double> o,
                         std::span<const double> o_prime, double sigma) {
    if (o.size() != o_prime.size())
        throw std::invalid_argument("rbf_kernel: dimension mismatch");
    if (!(sigma > 0.0))
        throw std::invalid_argument("rbf_kernel: sigma must be > 0");
    double sq = 0.0;
    for (std::size_t d = 0; d < o.size(); ++d) {
        const double diff = o[d] - o_prime[d];
        sq += diff * diff;
    }
    return std::exp(-0.5 * sq / (sigma * sigma));
}

/// Kernelized feature vector [K(o, b_1), ..., K(o, b_m), 1]; the trailing
/// constant is the bias feature.
inline std::vector<double> feature_vector(
    std::span<const double> o, const std::vector<std::vector<double>>& basis,
    double sigma) {
    if (basis.empty())
        throw std::invalid_argument("feature_vector: basis must be non-empty");
    std::vector<double> phi;
    phi.reserve(basis.size() + 1);
    for (const auto& b : basis) phi.push_back(rbf_kernel(o, b, sigma));
    phi.push_back(1.0);
    return phi;
}

}  // namespace decpos

#endif
