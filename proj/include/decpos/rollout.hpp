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

#ifndef DECPOS_ROLLOUT_HPP
#define DECPOS_ROLLOUT_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "decpos/domain.hpp"
#include "decpos/rng.hpp"

namespace decpos {

/// One completed macro-action of one robot: the controller node at which the
/// action was selected, the action, the observation and time of its
/// completion, and the node the controller moved to.
struct DecisionEpoch {
    int node = 0;
    int action = 0;
    std::vector<double> observation;
    int next_node = 0;
    long time = 0;
};

/// One joint rollout: per-robot decision epochs plus the discounted joint
/// return.
struct TrajectoryRecord {
    std::vector<std::vector<DecisionEpoch>> epochs;  // [robot][epoch]
    double discounted_return = 0.0;
};

struct ValueEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

namespace detail {

template <bool Record, GenerativeDomain D, TeamPolicy P>
TrajectoryRecord run_rollout(const D& domain, const P& policy, long horizon,
                             RngStream& rng) {
    const int n = domain.num_robots();
    const double gamma = domain.discount();
    const auto& bounds = domain.obs_bounds();

    TrajectoryRecord record;
    if constexpr (Record) record.epochs.resize(n);

    auto state = domain.initial_state(rng);
    std::vector<int> node(n, 0);
    std::vector<int> action(n, 0);
    // Every robot starts in node 0 and immediately selects a macro-action.
    for (int i = 0; i < n; ++i) {
        action[i] = policy.select_action(i, 0, rng);
        domain.begin_ma(state, i, action[i], rng);
    }

    long disc_time = 0;
    double disc = 1.0;
    for (long t = 0; t < horizon; ++t) {
        auto events = domain.step(state, rng);
        for (const auto& ev : events) {
            if (ev.robot < 0 || ev.robot >= n)
                throw std::runtime_error("rollout: event robot out of range");
            if (static_cast<int>(ev.observation.size()) !=
                static_cast<int>(bounds.size()))
                throw std::runtime_error(
                    "rollout: event observation has wrong dimension");
            for (std::size_t d = 0; d < bounds.size(); ++d) {
                const double x = ev.observation[d];
                if (!(x >= bounds[d].lo && x <= bounds[d].hi))
                    throw std::runtime_error(
                        "rollout: event observation outside domain bounds");
            }
            if (ev.time >= disc_time) {
                while (disc_time < ev.time) {
                    disc *= gamma;
                    ++disc_time;
                }
                record.discounted_return += disc * ev.reward;
            } else {
                record.discounted_return +=
                    std::pow(gamma, static_cast<double>(ev.time)) * ev.reward;
            }

            const int i = ev.robot;
            const int next =
                policy.transition(i, node[i], ev.observation, rng);
            if constexpr (Record)
                record.epochs[i].push_back(
                    {node[i], action[i], ev.observation, next, ev.time});
            node[i] = next;
            if (t + 1 < horizon) {
                action[i] = policy.select_action(i, node[i], rng);
                domain.begin_ma(state, i, action[i], rng);
            }
        }
    }
    return record;
}

}  // namespace detail

/// Simulates `horizon` unit timesteps of the asynchronous joint execution:
/// whenever a robot's macro-action completes, that robot transitions its
/// controller node on the received observation and begins its next
/// macro-action. Returns the full decision record and discounted return.
template <GenerativeDomain D, TeamPolicy P>
TrajectoryRecord rollout(const D& domain, const P& policy, long horizon,
                         RngStream rng) {
    return detail::run_rollout<true>(domain, policy, horizon, rng);
}

/// Monte Carlo policy value: mean and standard error of the discounted
/// return over n_traj rollouts, each on its own stream derived from
/// (seed_key, trajectory index). Deterministic given seed_key.
template <GenerativeDomain D, TeamPolicy P>
ValueEstimate evaluate(const D& domain, const P& policy, int n_traj,
                       long horizon, std::uint64_t seed_key) {
    if (n_traj < 1) throw std::invalid_argument("evaluate: n_traj must be >= 1");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int t = 0; t < n_traj; ++t) {
        RngStream rng(derive_stream(seed_key, t));
        const double v =
            detail::run_rollout<false>(domain, policy, horizon, rng)
                .discounted_return;
        sum += v;
        sum_sq += v * v;
    }
    ValueEstimate est;
    est.mean = sum / n_traj;
    if (n_traj > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / n_traj) / (n_traj - 1));
        est.std_error = std::sqrt(var / n_traj);
    }
    return est;
}

}  // namespace decpos

#endif
