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
#include <vector>

#include "decpos/domains/tiny.hpp"
#include "decpos/rollout.hpp"
#include "oracles.hpp"

using namespace decpos;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TinyDomain deterministic_tiny() {
    TinyConfig cfg;
    cfg.advance_prob = 1.0;
    return TinyDomain(cfg);
}

}  // namespace

TEST_CASE("deterministic tiny rollout matches the closed form", "[rollout]") {
    // advance, advance, collect repeats every 3 steps; rewards land at
    // times 3, 6, ..., 24 within horizon 25.
    const TinyDomain dom = deterministic_tiny();
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    double expected = 0.0;
    for (int k = 1; k <= 8; ++k) expected += std::pow(0.95, 3 * k);

    const TrajectoryRecord rec =
        rollout(dom, controller, 25, RngStream(derive_stream(1, 2, 3)));
    REQUIRE_THAT(rec.discounted_return, WithinRel(expected, 1e-12));

    // The independent dynamic-programming oracle agrees.
    const double dp = decpos_test::tiny_exact_value(
        dom.config(), {0, 1}, decpos_test::tiny_cycle_next(2), 25, 2);
    REQUIRE_THAT(dp, WithinRel(expected, 1e-12));
}

TEST_CASE("rollout records one epoch per completed step", "[rollout]") {
    const TinyDomain dom = deterministic_tiny();
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    const TrajectoryRecord rec =
        rollout(dom, controller, 6, RngStream(derive_stream(4, 5)));
    REQUIRE(rec.epochs.size() == 1);
    REQUIRE(rec.epochs[0].size() == 6);
    // Completion times are 1..6 and nodes follow the 0,0,0->1,1->0 cycle.
    for (int e = 0; e < 6; ++e)
        REQUIRE(rec.epochs[0][e].time == e + 1);
    REQUIRE(rec.epochs[0][0].node == 0);
    REQUIRE(rec.epochs[0][1].node == 0);
    REQUIRE(rec.epochs[0][1].next_node == 1);  // saw state 2
    REQUIRE(rec.epochs[0][2].node == 1);       // collects
    REQUIRE(rec.epochs[0][2].next_node == 0);
    REQUIRE(rec.epochs[0][2].action == 1);
}

TEST_CASE("horizon zero gives zero return and no epochs", "[rollout]") {
    const TinyDomain dom = deterministic_tiny();
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    const TrajectoryRecord rec =
        rollout(dom, controller, 0, RngStream(derive_stream(6)));
    REQUIRE(rec.discounted_return == 0.0);
    REQUIRE(rec.epochs[0].empty());
}

TEST_CASE("reward at completion time t is discounted by gamma^t",
          "[rollout]") {
    // With horizon 3 exactly one collection happens, at time 3.
    const TinyDomain dom = deterministic_tiny();
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    const TrajectoryRecord rec =
        rollout(dom, controller, 3, RngStream(derive_stream(7)));
    REQUIRE_THAT(rec.discounted_return,
                 WithinRel(std::pow(0.95, 3.0), 1e-12));
}

TEST_CASE("stochastic rollouts agree with the exact value in expectation",
          "[rollout]") {
    TinyConfig cfg;  // advance_prob = 0.8
    const TinyDomain dom(cfg);
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    const double exact = decpos_test::tiny_exact_value(
        cfg, {0, 1}, decpos_test::tiny_cycle_next(2), 25, 2);
    const ValueEstimate est =
        evaluate(dom, controller, 4000, 25, derive_stream(11, 13));
    REQUIRE_THAT(est.mean, WithinAbs(exact, 4.0 * est.std_error));
    REQUIRE(est.std_error > 0.0);
}

TEST_CASE("evaluation is deterministic in the seed key", "[rollout]") {
    const TinyDomain dom{TinyConfig{}};
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    const ValueEstimate a = evaluate(dom, controller, 50, 25, 12345);
    const ValueEstimate b = evaluate(dom, controller, 50, 25, 12345);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.std_error == b.std_error);
    const ValueEstimate c = evaluate(dom, controller, 50, 25, 54321);
    REQUIRE(a.mean != c.mean);
}

TEST_CASE("single-trajectory evaluation reports zero standard error",
          "[rollout]") {
    const TinyDomain dom{TinyConfig{}};
    const FsaAssignment controller = decpos_test::tiny_cycle_assignment(2);
    const ValueEstimate est = evaluate(dom, controller, 1, 25, 99);
    REQUIRE(est.std_error == 0.0);
    REQUIRE_THROWS_AS(evaluate(dom, controller, 0, 25, 99),
                      std::invalid_argument);
}

namespace {

/// Domain that emits an observation outside its declared bounds.
class BrokenObsDomain {
  public:
    struct State {
        long time = 0;
    };
    int num_robots() const { return 1; }
    int num_actions(int) const { return 1; }
    int obs_dim() const { return 1; }
    std::vector<Interval> obs_bounds() const { return {{0.0, 1.0}}; }
    double discount() const { return 0.9; }
    State initial_state(RngStream&) const { return {}; }
    void begin_ma(State&, int, int, RngStream&) const {}
    std::vector<CompletionEvent> step(State& s, RngStream&) const {
        s.time += 1;
        return {CompletionEvent{0, {2.5}, 0.0, s.time}};
    }
};

}  // namespace

TEST_CASE("out-of-bounds observations abort the rollout", "[rollout]") {
    static_assert(GenerativeDomain<BrokenObsDomain>);
    const BrokenObsDomain dom;
    const FsaAssignment controller(
        1, 1, {1}, ObservationGrid({{0.0, 1.0}}, 2), false,
        {FsaAssignmentTables{{0}, {0, 0}}});
    REQUIRE_THROWS_AS(rollout(dom, controller, 3, RngStream(1)),
                      std::runtime_error);
}
