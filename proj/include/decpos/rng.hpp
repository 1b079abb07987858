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

#ifndef DECPOS_RNG_HPP
#define DECPOS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace decpos {

/// SplitMix64 finalizer, used to derive well-separated stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a stream key from a base seed and a path of tags.
///
/// Every consumer of randomness in the library owns a distinct tag path, so
/// that runs are reproducible end to end and independent work items (samples,
/// trajectories, experiment cells) never share a stream.
template <typename... Tags>
constexpr std::uint64_t derive_stream(std::uint64_t seed, Tags... tags) {
    std::uint64_t h = splitmix64(seed);
    ((h = splitmix64(h ^ static_cast<std::uint64_t>(tags))), ...);
    return h;
}

/// Reserved first-level tags for the solvers' stream paths. Evaluation and
/// rollout streams are keyed by sample index only (not iteration), so a
/// search whose sampling distributions have degenerated reproduces the exact
/// same value set every iteration.
namespace streams {
inline constexpr std::uint64_t kPolicySample = 1;
inline constexpr std::uint64_t kEvaluate = 2;
inline constexpr std::uint64_t kRollout = 3;
inline constexpr std::uint64_t kFinalEvaluate = 4;
inline constexpr std::uint64_t kExhaustive = 5;
}  // namespace streams

/// A seeded random stream with the handful of draw primitives the library
/// needs. The raw generator is std::mt19937_64; the derived draws are fixed
/// here rather than delegated to <random> distributions so that output
/// sequences are identical across standard library implementations.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : gen_(splitmix64(key)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double next_canonical() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in {0, ..., n-1}; n must be positive.
    int next_int(int n) {
        const auto x = next_u64();
        return static_cast<int>((static_cast<unsigned __int128>(x) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    /// Uniform integer in {lo, ..., hi} inclusive.
    int next_int(int lo, int hi) { return lo + next_int(hi - lo + 1); }

    bool next_bernoulli(double p) { return next_canonical() < p; }

    /// Gaussian draw via Box-Muller; consumes exactly two raw values.
    double next_gaussian(double mean, double sigma) {
        const double u = next_open();
        const double v = next_canonical();
        const double z = std::sqrt(-2.0 * std::log(u)) *
                         std::cos(2.0 * M_PI * v);
        return mean + sigma * z;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace decpos

#endif
