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

#ifndef DECPOS_DOMAINS_TINY_HPP
#define DECPOS_DOMAINS_TINY_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "decpos/domain.hpp"
#include "decpos/rng.hpp"

namespace decpos {

/// Settings of the tiny oracle domain (see TinyDomain).
struct TinyConfig {
    double advance_prob = 0.8;   // success chance of the advance action
    double collect_reward = 1.0; // joint reward per successful collection
    double gamma = 0.95;
    /// 0: observations are exactly 0.0 / 1.0 (two discrete values).
    /// > 0: observations are the cell centers 0.25 / 0.75 plus Gaussian
    /// noise of this standard deviation, clamped to [0, 1].
    double obs_noise = 0.0;
};

inline void validate(const TinyConfig& cfg) {
    if (!(cfg.advance_prob >= 0.0 && cfg.advance_prob <= 1.0))
        throw std::invalid_argument(
            "TinyConfig: advance_prob must be in [0,1]");
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
        throw std::invalid_argument("TinyConfig: gamma must be in [0,1)");
    if (cfg.obs_noise < 0.0)
        throw std::invalid_argument("TinyConfig: obs_noise must be >= 0");
}

/// Single-robot chain domain, small enough to solve exactly.
///
/// Underlying states {0, 1, 2}; the robot starts at 0. Action 0 ("advance")
/// moves one state forward with probability advance_prob, capped at 2.
/// Action 1 ("collect") pays collect_reward and resets the state to 0 when
/// executed at state 2, and does nothing elsewhere. Both actions take one
/// timestep, so execution is synchronous. The scalar observation reports
/// whether the post-action state is 2.
class TinyDomain {
  public:
    struct State {
        int s = 0;
        int action = 0;
        long time = 0;
    };

    TinyDomain() = default;
    explicit TinyDomain(TinyConfig cfg) : cfg_(cfg) { validate(cfg_); }

    const TinyConfig& config() const { return cfg_; }

    int num_robots() const { return 1; }
    int num_actions(int) const { return 2; }
    int obs_dim() const { return 1; }
    std::vector<Interval> obs_bounds() const { return {{0.0, 1.0}}; }
    double discount() const { return cfg_.gamma; }

    State initial_state(RngStream&) const { return State{}; }

    void begin_ma(State& state, int robot, int ma, RngStream&) const {
        if (robot != 0)
            throw std::invalid_argument("TinyDomain: robot out of range");
        if (ma < 0 || ma > 1)
            throw std::invalid_argument("TinyDomain: unknown macro-action");
        state.action = ma;
    }

    std::vector<CompletionEvent> step(State& state, RngStream& rng) const {
        state.time += 1;
        double reward = 0.0;
        if (state.action == 0) {
            if (rng.next_bernoulli(cfg_.advance_prob))
                state.s = std::min(state.s + 1, 2);
        } else if (state.s == 2) {
            reward = cfg_.collect_reward;
            state.s = 0;
        }
        double obs;
        if (cfg_.obs_noise == 0.0) {
            obs = state.s == 2 ? 1.0 : 0.0;
        } else {
            const double center = state.s == 2 ? 0.75 : 0.25;
            obs = std::clamp(rng.next_gaussian(center, cfg_.obs_noise), 0.0,
                             1.0);
        }
        return {CompletionEvent{0, {obs}, reward, state.time}};
    }

  private:
    TinyConfig cfg_;
};

}  // namespace decpos

#endif
