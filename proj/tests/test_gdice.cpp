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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "decpos/domains/tiny.hpp"
#include "decpos/gdice.hpp"
#include "oracles.hpp"

using namespace decpos;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("per-row update without acceleration is plain smoothing",
          "[gdice]") {
    CategoricalParams row({0.25, 0.75});
    const CategoricalParams mle({1.0, 0.0});
    const bool injected = detail::update_row(
        row, mle, 1, 0.2, NoAcceleration{}, /*inject_allowed=*/true);
    REQUIRE_FALSE(injected);
    REQUIRE_THAT(row[0], WithinAbs(0.2 * 1.0 + 0.8 * 0.25, 1e-15));
}

TEST_CASE("per-row update with the dynamic rate uses iteration k",
          "[gdice]") {
    const DynamicSmoothing scheme{0.5, 15.0};
    CategoricalParams row_k1({0.5, 0.5});
    CategoricalParams row_k10 = row_k1;
    const CategoricalParams mle({1.0, 0.0});
    detail::update_row(row_k1, mle, 1, 0.999, scheme, false);
    detail::update_row(row_k10, mle, 10, 0.999, scheme, false);
    // k=1 uses alpha0=0.5; k=10 uses the decayed 0.39705... rate. The
    // configured base alpha is ignored by this scheme.
    REQUIRE_THAT(row_k1[0], WithinAbs(0.75, 1e-15));
    REQUIRE_THAT(row_k10[0],
                 WithinAbs(0.5 + 0.5 * 0.39705443395267548, 1e-12));
}

TEST_CASE("per-row update with noise adds the schedule then renormalizes",
          "[gdice]") {
    const NoiseInjection scheme{0.02, 1.0 / 2000.0};
    CategoricalParams row({0.5, 0.5});
    const CategoricalParams mle({1.0, 0.0});
    detail::update_row(row, mle, 1, 1.0, scheme, false);
    // alpha=1 makes the smoothed row (1,0); iteration 1 uses the full
    // omega_max: (1 + 0.02) / 1.04.
    REQUIRE_THAT(row[0], WithinAbs(1.02 / 1.04, 1e-15));
    REQUIRE_THAT(row[1], WithinAbs(0.02 / 1.04, 1e-15));

    // Far past the schedule the noise is zero.
    CategoricalParams late({0.5, 0.5});
    detail::update_row(late, mle, 100, 1.0, scheme, false);
    REQUIRE(late[0] == 1.0);
}

TEST_CASE("entropy injection fires only when allowed and degenerate",
          "[gdice]") {
    const MaxEntropyInjection scheme{0.1, 0.1};
    const CategoricalParams mle({1.0, 0.0});

    // Degenerate row, injection allowed: mixes toward uniform.
    CategoricalParams row({1.0, 0.0});
    REQUIRE(detail::update_row(row, mle, 1, 1.0, scheme, true));
    REQUIRE_THAT(row[0], WithinAbs(0.9 * 1.0 + 0.1 * 0.5, 1e-15));

    // Same row but not yet converged: plain smoothing only.
    CategoricalParams gated({1.0, 0.0});
    REQUIRE_FALSE(detail::update_row(gated, mle, 1, 1.0, scheme, false));
    REQUIRE(gated[0] == 1.0);

    // Non-degenerate row: no injection even when allowed.
    CategoricalParams healthy({0.5, 0.5});
    const CategoricalParams balanced({0.5, 0.5});
    REQUIRE_FALSE(detail::update_row(healthy, balanced, 1, 0.5, scheme, true));
}

TEST_CASE("rows always remain on the simplex after any update", "[gdice]") {
    RngStream rng(77);
    const std::vector<AccelerationScheme> schemes = {
        NoAcceleration{}, DynamicSmoothing{0.5, 15.0},
        NoiseInjection{0.02, 1.0 / 2000.0}, MaxEntropyInjection{0.03, 0.1}};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + rng.next_int(5);
        std::vector<int> counts(n, 0);
        counts[rng.next_int(n)] = 1 + rng.next_int(9);
        CategoricalParams row = uniform_categorical(n);
        for (const auto& scheme : schemes) {
            CategoricalParams working = row;
            detail::update_row(working, mle_categorical(counts),
                               1 + rng.next_int(50), 0.3, scheme,
                               trial % 2 == 0);
            REQUIRE(is_valid_simplex(working));
        }
    }
}

TEST_CASE("search finds a near-optimal tiny controller", "[gdice]") {
    const TinyDomain dom{TinyConfig{}};
    GdiceConfig cfg;
    cfg.num_nodes = 2;
    cfg.iterations = 40;
    cfg.samples = 30;
    cfg.elites = 5;
    cfg.alpha = 0.3;
    cfg.horizon = 25;
    cfg.eval_trajectories = 30;
    const GdiceResult result = gdice_search(dom, cfg, 2024);

    // Exact optimum over all deterministic 2-node controllers is
    // 3.6041071754554066 (independent dynamic-programming enumeration).
    const double exact_opt = 3.6041071754554066;
    REQUIRE(result.best_value > 0.8 * exact_opt);

    // The returned policy is a point-mass controller whose Monte Carlo
    // value reproduces best_value under the solver's evaluation streams.
    for (const auto& row : result.best_policy.tables(0).action)
        REQUIRE((row[0] == 1.0 || row[1] == 1.0));
}

TEST_CASE("best value history is monotone and matches the trace", "[gdice]") {
    const TinyDomain dom{TinyConfig{}};
    GdiceConfig cfg;
    cfg.num_nodes = 2;
    cfg.iterations = 25;
    cfg.samples = 20;
    cfg.elites = 4;
    cfg.horizon = 15;
    cfg.eval_trajectories = 10;
    const GdiceResult result = gdice_search(dom, cfg, 7);
    REQUIRE(result.trace.rows.size() == 25);
    for (std::size_t i = 1; i < result.trace.rows.size(); ++i)
        REQUIRE(result.trace.rows[i].best_value >=
                result.trace.rows[i - 1].best_value);
    REQUIRE(result.trace.rows.back().best_value == result.best_value);
    // The first iteration is always gated by -inf.
    REQUIRE(result.trace.rows[0].worst_elite ==
            -std::numeric_limits<double>::infinity());
}

TEST_CASE("search is deterministic in the seed", "[gdice]") {
    const TinyDomain dom{TinyConfig{}};
    GdiceConfig cfg;
    cfg.num_nodes = 2;
    cfg.iterations = 10;
    cfg.samples = 15;
    cfg.elites = 3;
    cfg.horizon = 10;
    cfg.eval_trajectories = 5;
    const GdiceResult a = gdice_search(dom, cfg, 99);
    const GdiceResult b = gdice_search(dom, cfg, 99);
    REQUIRE(a.best_value == b.best_value);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
        REQUIRE(a.trace.rows[i].best_value == b.trace.rows[i].best_value);
        REQUIRE(a.trace.rows[i].worst_elite == b.trace.rows[i].worst_elite);
        REQUIRE(a.trace.rows[i].ma_entropies == b.trace.rows[i].ma_entropies);
    }
    const GdiceResult c = gdice_search(dom, cfg, 100);
    bool any_diff = c.best_value != a.best_value;
    for (std::size_t i = 0; !any_diff && i < a.trace.rows.size(); ++i)
        any_diff = a.trace.rows[i].best_value != c.trace.rows[i].best_value;
    REQUIRE(any_diff);
}

TEST_CASE("alpha 1 with no acceleration degenerates quickly", "[gdice]") {
    const TinyDomain dom{TinyConfig{}};
    GdiceConfig cfg;
    cfg.num_nodes = 2;
    cfg.iterations = 60;
    cfg.samples = 20;
    cfg.elites = 3;
    cfg.alpha = 1.0;
    cfg.horizon = 15;
    cfg.eval_trajectories = 10;
    const GdiceResult result = gdice_search(dom, cfg, 5);
    const TraceRow& last = result.trace.rows.back();
    const double limit = 0.05 * std::log(2.0);
    for (double h : last.ma_entropies) REQUIRE(h < limit);
    for (double h : last.transition_entropies) REQUIRE(h < limit);
}

TEST_CASE("config validation", "[gdice]") {
    const TinyDomain dom{TinyConfig{}};
    GdiceConfig cfg;
    cfg.elites = cfg.samples + 1;
    REQUIRE_THROWS_AS(gdice_search(dom, cfg, 1), std::invalid_argument);
    cfg = GdiceConfig{};
    cfg.alpha = 0.0;
    REQUIRE_THROWS_AS(gdice_search(dom, cfg, 1), std::invalid_argument);
    cfg = GdiceConfig{};
    cfg.discretization = 0;
    REQUIRE_THROWS_AS(gdice_search(dom, cfg, 1), std::invalid_argument);
}

TEST_CASE("shared weights force identical per-robot tables", "[gdice]") {
    // Two-robot wrapper around the tiny domain: both robots run the chain
    // independently and rewards add.
    class TwinTiny {
      public:
        struct State {
            TinyDomain::State a, b;
            long time = 0;
        };
        int num_robots() const { return 2; }
        int num_actions(int) const { return 2; }
        int obs_dim() const { return 1; }
        std::vector<Interval> obs_bounds() const { return {{0.0, 1.0}}; }
        double discount() const { return inner_.discount(); }
        State initial_state(RngStream& rng) const {
            return {inner_.initial_state(rng), inner_.initial_state(rng), 0};
        }
        void begin_ma(State& s, int robot, int ma, RngStream& rng) const {
            inner_.begin_ma(robot == 0 ? s.a : s.b, 0, ma, rng);
        }
        std::vector<CompletionEvent> step(State& s, RngStream& rng) const {
            auto ev_a = inner_.step(s.a, rng);
            auto ev_b = inner_.step(s.b, rng);
            s.time += 1;
            std::vector<CompletionEvent> out;
            out.push_back({0, ev_a[0].observation, ev_a[0].reward, s.time});
            out.push_back({1, ev_b[0].observation, ev_b[0].reward, s.time});
            return out;
        }

      private:
        TinyDomain inner_;
    };
    static_assert(GenerativeDomain<TwinTiny>);

    const TwinTiny dom;
    GdiceConfig cfg;
    cfg.num_nodes = 2;
    cfg.iterations = 8;
    cfg.samples = 10;
    cfg.elites = 2;
    cfg.horizon = 10;
    cfg.eval_trajectories = 5;
    cfg.share_weights = true;
    const GdiceResult result = gdice_search(dom, cfg, 3);
    REQUIRE(result.distributions.num_tables() == 1);
    REQUIRE(result.best_policy.num_tables() == 1);
    // Both robots read the same table.
    RngStream r1(1), r2(1);
    REQUIRE(result.best_policy.select_action(0, 0, r1) ==
            result.best_policy.select_action(1, 0, r2));
}
