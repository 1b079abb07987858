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

#ifndef DECPOS_GDICE_HPP
#define DECPOS_GDICE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "decpos/acceleration.hpp"
#include "decpos/categorical.hpp"
#include "decpos/domain.hpp"
#include "decpos/fsa.hpp"
#include "decpos/grid.hpp"
#include "decpos/rollout.hpp"
#include "decpos/rng.hpp"
#include "decpos/search_trace.hpp"

namespace decpos {

/// Cross-entropy search settings for FSA policies over a discretized
/// observation space.
struct GdiceConfig {
    int num_nodes = 5;
    int iterations = 100;        // search iterations
    int samples = 50;            // candidate controllers per iteration
    int elites = 5;              // best candidates kept for the update
    double alpha = 0.2;          // smoothing / learning rate
    long horizon = 25;
    int eval_trajectories = 100; // Monte Carlo rollouts per candidate
    int discretization = 2;      // bins per observation dimension
    AccelerationScheme acceleration = NoAcceleration{};
    int window = 10;             // value-convergence window
    double tolerance = 1e-6;     // relative value-convergence tolerance
    bool share_weights = false;  // one parameter set for the whole team
};

inline void validate(const GdiceConfig& cfg) {
    if (cfg.num_nodes < 1)
        throw std::invalid_argument("GdiceConfig: num_nodes must be >= 1");
    if (cfg.iterations < 1)
        throw std::invalid_argument("GdiceConfig: iterations must be >= 1");
    if (cfg.elites < 1 || cfg.elites > cfg.samples)
        throw std::invalid_argument(
            "GdiceConfig: need 1 <= elites <= samples");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("GdiceConfig: alpha must be in (0,1]");
    if (cfg.horizon < 0)
        throw std::invalid_argument("GdiceConfig: horizon must be >= 0");
    if (cfg.eval_trajectories < 1)
        throw std::invalid_argument(
            "GdiceConfig: eval_trajectories must be >= 1");
    if (cfg.discretization < 1)
        throw std::invalid_argument(
            "GdiceConfig: discretization must be >= 1");
    if (cfg.window < 1)
        throw std::invalid_argument("GdiceConfig: window must be >= 1");
    if (cfg.tolerance < 0.0)
        throw std::invalid_argument("GdiceConfig: tolerance must be >= 0");
    validate(cfg.acceleration);
}

struct GdiceResult {
    FsaPolicy best_policy;  // point-mass controller, best candidate sampled
    double best_value = -std::numeric_limits<double>::infinity();
    SearchTrace trace;
    FsaPolicy distributions;  // final sampling distributions
};

/// Draws one deterministic controller from the sampling distributions.
inline FsaAssignment sample_assignment(const FsaPolicy& dists,
                                       RngStream& rng) {
    std::vector<FsaAssignmentTables> tables(dists.num_tables());
    for (int t = 0; t < dists.num_tables(); ++t) {
        const auto& src = dists.tables(t);
        auto& dst = tables[t];
        dst.action.reserve(src.action.size());
        for (const auto& row : src.action)
            dst.action.push_back(sample(row, rng));
        dst.next.reserve(src.transition.size());
        for (const auto& row : src.transition)
            dst.next.push_back(sample(row, rng));
    }
    std::vector<int> num_actions(dists.num_robots());
    for (int i = 0; i < dists.num_robots(); ++i)
        num_actions[i] = dists.num_actions(i);
    return FsaAssignment(dists.num_robots(), dists.num_nodes(),
                         std::move(num_actions), dists.grid(), dists.shared(),
                         std::move(tables));
}

namespace detail {

/// Applies the per-iteration parameter update to one distribution row.
/// theta_new is the elite MLE; iteration k is 1-based. Returns true when a
/// maximal-entropy injection was applied to this row.
inline bool update_row(CategoricalParams& row,
                       const CategoricalParams& theta_new, long k,
                       double base_alpha, const AccelerationScheme& scheme,
                       bool inject_allowed) {
    const std::size_t n = row.size();
    bool injected = false;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, NoAcceleration>) {
                row = smooth_update(theta_new, row, base_alpha);
            } else if constexpr (std::is_same_v<S, DynamicSmoothing>) {
                row = smooth_update(theta_new, row,
                                    dynamic_alpha(k, s.alpha0, s.beta));
            } else if constexpr (std::is_same_v<S, NoiseInjection>) {
                row = smooth_update(theta_new, row, base_alpha);
                const double omega =
                    linear_noise(k - 1, s.omega_max, s.rate);
                if (omega > 0.0) row = add_noise(row, omega);
            } else {
                static_assert(std::is_same_v<S, MaxEntropyInjection>);
                CategoricalParams base =
                    smooth_update(theta_new, row, base_alpha);
                const bool degenerate =
                    n > 1 &&
                    entropy(base) / std::log(static_cast<double>(n)) <
                        s.tau_h;
                if (inject_allowed && degenerate && s.alpha_ei > 0.0) {
                    row = inject_max_entropy(theta_new, row, base_alpha,
                                             s.alpha_ei);
                    injected = true;
                } else {
                    row = std::move(base);
                }
            }
        },
        scheme);
    return injected;
}

/// Injection pass for iterations without an elite update: each degenerate
/// row is mixed toward uniform at the scheme's rate.
inline bool inject_only(CategoricalParams& row,
                        const AccelerationScheme& scheme) {
    const auto* s = std::get_if<MaxEntropyInjection>(&scheme);
    if (s == nullptr || s->alpha_ei <= 0.0) return false;
    const std::size_t n = row.size();
    if (n <= 1) return false;
    if (entropy(row) / std::log(static_cast<double>(n)) >= s->tau_h)
        return false;
    row = inject_max_entropy(row, row, 1.0, s->alpha_ei);
    return true;
}

}  // namespace detail

/// Cross-entropy policy search over deterministic FSAs.
///
/// Per iteration: sample `samples` controllers from the current sampling
/// distributions, estimate each one's value by Monte Carlo, keep candidates
/// at or above the previous iteration's worst elite value, take the best
/// `elites` of those, update every distribution row toward the elite MLE
/// with smoothing, and apply the configured acceleration scheme. The best
/// deterministic controller ever sampled is returned together with the
/// iteration trace and the final sampling distributions.
template <GenerativeDomain D>
GdiceResult gdice_search(const D& domain, const GdiceConfig& cfg,
                         std::uint64_t seed) {
    validate(cfg);
    const int n_robots = domain.num_robots();
    std::vector<int> num_actions(n_robots);
    for (int i = 0; i < n_robots; ++i) num_actions[i] = domain.num_actions(i);
    ObservationGrid grid(domain.obs_bounds(), cfg.discretization);

    GdiceResult result;
    FsaPolicy dists =
        FsaPolicy::uniform(n_robots, cfg.num_nodes, num_actions,
                           std::move(grid), cfg.share_weights);

    FsaAssignment best_assignment;
    double threshold = -std::numeric_limits<double>::infinity();
    std::vector<double> best_history;
    std::vector<FsaAssignment> candidates(cfg.samples);
    std::vector<double> values(cfg.samples);

    for (long k = 1; k <= cfg.iterations; ++k) {
        for (int s = 0; s < cfg.samples; ++s) {
            RngStream sample_rng(
                derive_stream(seed, streams::kPolicySample, k, s));
            candidates[s] = sample_assignment(dists, sample_rng);
            values[s] = evaluate(domain, candidates[s],
                                 cfg.eval_trajectories, cfg.horizon,
                                 derive_stream(seed, streams::kEvaluate, s))
                            .mean;
            if (values[s] > result.best_value) {
                result.best_value = values[s];
                best_assignment = candidates[s];
            }
        }
        best_history.push_back(result.best_value);
        const bool inject_allowed =
            value_converged(best_history, cfg.window, cfg.tolerance);

        // Elite selection against the previous iteration's worst elite.
        std::vector<int> passing;
        for (int s = 0; s < cfg.samples; ++s)
            if (values[s] >= threshold) passing.push_back(s);
        std::stable_sort(passing.begin(), passing.end(),
                         [&](int a, int b) { return values[a] > values[b]; });
        if (static_cast<int>(passing.size()) > cfg.elites)
            passing.resize(cfg.elites);

        const double used_threshold = threshold;
        bool injected = false;
        if (!passing.empty()) {
            threshold = values[passing.back()];
            for (int i : passing)
                threshold = std::min(threshold, values[i]);

            std::vector<int> counts;
            for (int t = 0; t < dists.num_tables(); ++t) {
                auto& tab = dists.tables(t);
                for (int q = 0; q < cfg.num_nodes; ++q) {
                    counts.assign(tab.action[q].size(), 0);
                    for (int e : passing)
                        ++counts[candidates[e].tables()[t].action[q]];
                    injected |= detail::update_row(
                        tab.action[q], mle_categorical(counts), k, cfg.alpha,
                        cfg.acceleration, inject_allowed);
                }
                for (std::size_t row = 0; row < tab.transition.size();
                     ++row) {
                    counts.assign(tab.transition[row].size(), 0);
                    for (int e : passing)
                        ++counts[candidates[e].tables()[t].next[row]];
                    injected |= detail::update_row(
                        tab.transition[row], mle_categorical(counts), k,
                        cfg.alpha, cfg.acceleration, inject_allowed);
                }
            }
        } else if (inject_allowed) {
            for (int t = 0; t < dists.num_tables(); ++t) {
                auto& tab = dists.tables(t);
                for (auto& row : tab.action)
                    injected |= detail::inject_only(row, cfg.acceleration);
                for (auto& row : tab.transition)
                    injected |= detail::inject_only(row, cfg.acceleration);
            }
        }
        if (injected)
            threshold = -std::numeric_limits<double>::infinity();

        TraceRow trace_row;
        trace_row.iteration = k;
        trace_row.best_value = result.best_value;
        trace_row.worst_elite = used_threshold;
        trace_row.inject_allowed = inject_allowed;
        trace_row.injected = injected;
        for (int t = 0; t < dists.num_tables(); ++t) {
            const auto& tab = dists.tables(t);
            for (const auto& row : tab.action)
                trace_row.ma_entropies.push_back(entropy(row));
            for (const auto& row : tab.transition)
                trace_row.transition_entropies.push_back(entropy(row));
        }
        result.trace.rows.push_back(std::move(trace_row));
    }

    result.best_policy = best_assignment.to_policy();
    result.distributions = std::move(dists);
    return result;
}

struct ExhaustiveResult {
    double best_value = -std::numeric_limits<double>::infinity();
    FsaAssignment best;
};

/// Enumerates every deterministic FSA controller of the given size and
/// returns the best by Monte Carlo evaluation. All candidates share the same
/// evaluation streams, so the comparison is exact under a fixed seed. The
/// joint search space must not exceed `guard` controllers.
template <GenerativeDomain D>
ExhaustiveResult exhaustive_policy_search(const D& domain, int num_nodes,
                                          int discretization, long horizon,
                                          int eval_trajectories,
                                          std::uint64_t seed,
                                          double guard = 1e6) {
    if (num_nodes < 1)
        throw std::invalid_argument(
            "exhaustive_policy_search: num_nodes must be >= 1");
    const int n_robots = domain.num_robots();
    ObservationGrid grid(domain.obs_bounds(), discretization);
    const long n_bins = grid.num_bins();

    std::vector<int> num_actions(n_robots);
    double total = 1.0;
    for (int i = 0; i < n_robots; ++i) {
        num_actions[i] = domain.num_actions(i);
        total *= std::pow(static_cast<double>(num_actions[i]), num_nodes);
        total *= std::pow(static_cast<double>(num_nodes),
                          static_cast<double>(num_nodes) * n_bins);
        if (total > guard)
            throw std::invalid_argument(
                "exhaustive_policy_search: search space exceeds guard");
    }

    // Mixed-radix odometer over every table entry of every robot.
    std::vector<int> radix;
    for (int i = 0; i < n_robots; ++i) {
        for (int q = 0; q < num_nodes; ++q) radix.push_back(num_actions[i]);
        for (long r = 0; r < static_cast<long>(num_nodes) * n_bins; ++r)
            radix.push_back(num_nodes);
    }
    std::vector<int> digits(radix.size(), 0);

    const std::uint64_t eval_key = derive_stream(seed, streams::kExhaustive);
    ExhaustiveResult result;
    while (true) {
        std::vector<FsaAssignmentTables> tables(n_robots);
        std::size_t pos = 0;
        for (int i = 0; i < n_robots; ++i) {
            for (int q = 0; q < num_nodes; ++q)
                tables[i].action.push_back(digits[pos++]);
            for (long r = 0; r < static_cast<long>(num_nodes) * n_bins; ++r)
                tables[i].next.push_back(digits[pos++]);
        }
        FsaAssignment candidate(n_robots, num_nodes, num_actions, grid,
                                /*shared=*/false, std::move(tables));
        const double v =
            evaluate(domain, candidate, eval_trajectories, horizon, eval_key)
                .mean;
        if (v > result.best_value) {
            result.best_value = v;
            result.best = std::move(candidate);
        }

        std::size_t d = 0;
        while (d < digits.size() && ++digits[d] == radix[d]) {
            digits[d] = 0;
            ++d;
        }
        if (d == digits.size()) break;
    }
    return result;
}

}  // namespace decpos

#endif
