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

#ifndef DECPOS_DOMAIN_HPP
#define DECPOS_DOMAIN_HPP

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "decpos/rng.hpp"

namespace decpos {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double width() const { return hi - lo; }
};

/// Emitted by a domain when one robot's macro-action finishes: the robot
/// makes its (continuous) macro-observation and any reward earned during the
/// action is attributed at this timestep.
struct CompletionEvent {
    int robot = 0;
    std::vector<double> observation;
    double reward = 0.0;
    long time = 0;
};

/// Generative Dec-POSMDP environment contract.
///
/// A domain owns its configuration; mutable episode state lives in a State
/// value held by the caller, so concurrent rollouts never share mutable
/// data. `step` advances global time by exactly one unit and reports the
/// macro-actions that completed during that unit. Each robot's completed
/// action must be followed by a `begin_ma` before its next completion can
/// occur.
template <typename D>
concept GenerativeDomain =
    requires(const D& d, typename D::State& state, RngStream& rng) {
        typename D::State;
        { d.num_robots() } -> std::convertible_to<int>;
        { d.num_actions(int{}) } -> std::convertible_to<int>;
        { d.obs_dim() } -> std::convertible_to<int>;
        { d.obs_bounds() } -> std::convertible_to<std::vector<Interval>>;
        { d.discount() } -> std::convertible_to<double>;
        { d.initial_state(rng) } -> std::same_as<typename D::State>;
        { d.begin_ma(state, int{}, int{}, rng) };
        { d.step(state, rng) } -> std::same_as<std::vector<CompletionEvent>>;
    };

/// Per-robot decision controller contract: emits a macro-action at the
/// current controller node and, given the observation received at
/// completion, the next node. Node indices lie in [0, num_nodes()).
template <typename P>
concept TeamPolicy =
    requires(const P& p, RngStream& rng, std::span<const double> obs) {
        { p.num_nodes() } -> std::convertible_to<int>;
        { p.select_action(int{}, int{}, rng) } -> std::convertible_to<int>;
        { p.transition(int{}, int{}, obs, rng) } -> std::convertible_to<int>;
    };

}  // namespace decpos

#endif
