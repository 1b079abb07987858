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

#ifndef DECPOS_EPSCKO_HPP
#define DECPOS_EPSCKO_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "decpos/categorical.hpp"
#include "decpos/domain.hpp"
#include "decpos/kernel_queue.hpp"
#include "decpos/klr.hpp"
#include "decpos/rollout.hpp"
#include "decpos/rng.hpp"
#include "decpos/search_trace.hpp"
#include "decpos/skfsa.hpp"

namespace decpos {

/// Search settings for stochastic kernel-based FSA policies.
struct EpsckoConfig {
    int num_nodes = 6;
    int iterations = 100;         // N_k
    int samples = 50;             // candidate evaluations per iteration
    int elites = 5;               // best trajectories kept per iteration
    int queue_length = 10;        // FIFO kernel queue capacity (bundles)
    double alpha = 0.2;           // smoothing / learning rate
    double alpha_ei = 0.03;       // entropy injection rate; 0 disables
    double sigma = 0.0;           // kernel radius; <= 0 picks 10% of the
                                  // observation-box diagonal
    double lambda = 1e-3;         // L2 coefficient for KLR training
    long horizon = 40;
    int sample_trajectories = 1;  // rollouts averaged per candidate value
    int eval_trajectories = 1000; // final reported value (used by callers)
    int window = 10;              // value-convergence window
    double tolerance = 1e-6;      // relative value-convergence tolerance
    double tau_h = 0.1;           // normalized-entropy degeneracy threshold
};

inline void validate(const EpsckoConfig& cfg) {
    if (cfg.num_nodes < 1)
        throw std::invalid_argument("EpsckoConfig: num_nodes must be >= 1");
    if (cfg.iterations < 1)
        throw std::invalid_argument("EpsckoConfig: iterations must be >= 1");
    if (cfg.elites < 1 || cfg.elites > cfg.samples)
        throw std::invalid_argument(
            "EpsckoConfig: need 1 <= elites <= samples");
    if (cfg.queue_length < 1)
        throw std::invalid_argument(
            "EpsckoConfig: queue_length must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("EpsckoConfig: alpha must be in (0,1]");
    if (!(cfg.alpha_ei >= 0.0 && cfg.alpha_ei < 1.0))
        throw std::invalid_argument(
            "EpsckoConfig: alpha_ei must be in [0,1)");
    if (cfg.lambda < 0.0)
        throw std::invalid_argument("EpsckoConfig: lambda must be >= 0");
    if (cfg.horizon < 0)
        throw std::invalid_argument("EpsckoConfig: horizon must be >= 0");
    if (cfg.sample_trajectories < 1)
        throw std::invalid_argument(
            "EpsckoConfig: sample_trajectories must be >= 1");
    if (cfg.eval_trajectories < 1)
        throw std::invalid_argument(
            "EpsckoConfig: eval_trajectories must be >= 1");
    if (cfg.window < 1)
        throw std::invalid_argument("EpsckoConfig: window must be >= 1");
    if (cfg.tolerance < 0.0)
        throw std::invalid_argument("EpsckoConfig: tolerance must be >= 0");
    if (!(cfg.tau_h > 0.0 && cfg.tau_h <= 1.0))
        throw std::invalid_argument("EpsckoConfig: tau_h must be in (0,1]");
}

struct EpsckoResult {
    SkFsaPolicy best_policy;  // snapshot that achieved best_value
    /// Highest per-iteration mean sample value: the candidate rollouts of one
    /// iteration are i.i.d. draws from that iteration's stochastic policy, so
    /// their mean estimates the policy's value (a single lucky rollout does
    /// not move this).
    double best_value = -std::numeric_limits<double>::infinity();
    SearchTrace trace;
    SkFsaPolicy final_policy;  // policy state at termination
};

/// Mixes every degenerate distribution of the policy with uniform at rate
/// alpha_ei: macro-action rows whose normalized entropy is below tau_h, and
/// transition functions whose approximate normalized entropy is below tau_h.
/// Returns true when anything was injected.
inline bool try_inject(SkFsaPolicy& policy, double alpha_ei, double tau_h) {
    if (alpha_ei <= 0.0) return false;
    bool injected = false;
    const int nodes = policy.num_nodes();
    const double log_nodes = std::log(static_cast<double>(nodes));
    for (int i = 0; i < policy.num_robots(); ++i) {
        SkFsaRobot& robot = policy.robot(i);
        for (auto& row : robot.action) {
            const std::size_t n = row.size();
            if (n <= 1) continue;
            if (entropy(row) / std::log(static_cast<double>(n)) >= tau_h)
                continue;
            row = inject_max_entropy(row, row, 1.0, alpha_ei);
            injected = true;
        }
        if (nodes <= 1) continue;
        for (auto& fn : robot.transition) {
            if (approx_transition_entropy(fn) / log_nodes >= tau_h) continue;
            fn = inject_transition_entropy(fn, alpha_ei);
            injected = true;
        }
    }
    return injected;
}

/// Entropy-based policy search over stochastic kernel-based FSAs.
///
/// Per iteration: draw `samples` joint rollouts from the current stochastic
/// policy, recording every macro-action choice, continuous observation, and
/// node transition; keep rollouts at or above the previous worst elite
/// value; push the best `elites` rollouts' transition data into per-robot
/// FIFO kernel queues; update macro-action distributions by smoothed MLE
/// over the elite decision epochs; retrain every node's transition function
/// from its queue; once the best value has converged since the last
/// injection, inject entropy into degenerate distributions, which resets
/// the elite threshold and restarts convergence tracking. Returns the
/// stochastic policy snapshot whose iteration-mean sample value was best.
template <GenerativeDomain D>
EpsckoResult epscko_search(const D& domain, const EpsckoConfig& cfg,
                           std::uint64_t seed) {
    validate(cfg);
    const int n_robots = domain.num_robots();
    std::vector<int> num_actions(n_robots);
    for (int i = 0; i < n_robots; ++i) num_actions[i] = domain.num_actions(i);

    double sigma = cfg.sigma;
    if (!(sigma > 0.0)) {
        double sq = 0.0;
        for (const Interval& b : domain.obs_bounds())
            sq += b.width() * b.width();
        sigma = 0.1 * std::sqrt(sq);
    }

    EpsckoResult result;
    SkFsaPolicy policy = SkFsaPolicy::uniform(n_robots, cfg.num_nodes,
                                              num_actions, sigma, cfg.lambda);
    std::vector<FifoKernelQueue> queues(
        n_robots, FifoKernelQueue(cfg.queue_length));

    double threshold = -std::numeric_limits<double>::infinity();
    std::vector<double> best_history;
    std::vector<double> values(cfg.samples);
    std::vector<std::vector<TrajectoryRecord>> records(cfg.samples);

    for (long k = 1; k <= cfg.iterations; ++k) {
        for (int s = 0; s < cfg.samples; ++s) {
            records[s].clear();
            double total = 0.0;
            for (int j = 0; j < cfg.sample_trajectories; ++j) {
                records[s].push_back(rollout(
                    domain, policy, cfg.horizon,
                    RngStream(derive_stream(seed, streams::kRollout, s, j))));
                total += records[s].back().discounted_return;
            }
            values[s] = total / cfg.sample_trajectories;
        }
        const double iter_best = *std::max_element(values.begin(), values.end());
        if (iter_best > result.best_value) {
            result.best_value = iter_best;
            result.best_policy = policy;
        }
        best_history.push_back(result.best_value);
        const bool inject_allowed =
            value_converged(best_history, cfg.window, cfg.tolerance);

        std::vector<int> passing;
        for (int s = 0; s < cfg.samples; ++s)
            if (values[s] >= threshold) passing.push_back(s);
        std::stable_sort(passing.begin(), passing.end(),
                         [&](int a, int b) { return values[a] > values[b]; });
        if (static_cast<int>(passing.size()) > cfg.elites)
            passing.resize(cfg.elites);

        const double used_threshold = threshold;
        if (!passing.empty()) {
            threshold = values[passing.back()];

            for (int i = 0; i < n_robots; ++i) {
                ObservationBundle bundle;
                bundle.iteration = k;
                for (int e : passing)
                    for (const TrajectoryRecord& rec : records[e])
                        for (const DecisionEpoch& ep : rec.epochs[i])
                            bundle.samples.push_back(
                                {ep.node, ep.observation, ep.next_node});
                queues[i].push(std::move(bundle));
            }

            std::vector<int> counts;
            for (int i = 0; i < n_robots; ++i) {
                SkFsaRobot& robot = policy.robot(i);
                for (int q = 0; q < cfg.num_nodes; ++q) {
                    counts.assign(robot.action[q].size(), 0);
                    int total = 0;
                    for (int e : passing)
                        for (const TrajectoryRecord& rec : records[e])
                            for (const DecisionEpoch& ep : rec.epochs[i])
                                if (ep.node == q) {
                                    ++counts[ep.action];
                                    ++total;
                                }
                    // Nodes unvisited by the elite trajectories keep their
                    // previous distribution.
                    if (total > 0)
                        robot.action[q] = smooth_update(
                            mle_categorical(counts), robot.action[q],
                            cfg.alpha);
                }
                for (int q = 0; q < cfg.num_nodes; ++q)
                    robot.transition[q] = train_weighted_klr(
                        queues[i], q, cfg.num_nodes, cfg.alpha, sigma,
                        cfg.lambda, &robot.transition[q]);
            }
        }

        bool injected = false;
        if (inject_allowed)
            injected = try_inject(policy, cfg.alpha_ei, cfg.tau_h);
        if (injected)
            threshold = -std::numeric_limits<double>::infinity();

        TraceRow row;
        row.iteration = k;
        row.best_value = result.best_value;
        row.worst_elite = used_threshold;
        row.inject_allowed = inject_allowed;
        row.injected = injected;
        for (int i = 0; i < n_robots; ++i) {
            const SkFsaRobot& robot = policy.robot(i);
            for (const auto& r : robot.action)
                row.ma_entropies.push_back(entropy(r));
            for (const auto& fn : robot.transition)
                row.transition_entropies.push_back(
                    approx_transition_entropy(fn));
        }
        result.trace.rows.push_back(std::move(row));
    }

    result.final_policy = std::move(policy);
    return result;
}

}  // namespace decpos

#endif
