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
#include <limits>
#include <vector>

#include "decpos/search_trace.hpp"

using namespace decpos;

TEST_CASE("convergence needs a full window", "[trace]") {
    std::vector<double> h = {1.0, 1.0, 1.0};
    REQUIRE_FALSE(value_converged(h, 4, 1e-6));
    REQUIRE(value_converged(h, 3, 1e-6));
    REQUIRE(value_converged(h, 1, 1e-6));
}

TEST_CASE("convergence looks only at the last window", "[trace]") {
    std::vector<double> h = {0.0, 5.0, 9.0, 9.0, 9.0};
    REQUIRE(value_converged(h, 3, 1e-6));
    REQUIRE_FALSE(value_converged(h, 4, 1e-6));
}

TEST_CASE("tolerance is relative to the value magnitude", "[trace]") {
    // Spread 5e-5 over values near 100: relative spread 5e-7 < 1e-6.
    std::vector<double> h = {100.0, 100.00005, 100.0, 100.00002};
    REQUIRE(value_converged(h, 4, 1e-6));
    // The same absolute spread near 0.01 uses the max(1, |v|) floor.
    std::vector<double> small = {0.01, 0.01000005, 0.01, 0.01000002};
    REQUIRE(value_converged(small, 4, 1e-6));
    std::vector<double> wide = {0.01, 0.02, 0.01, 0.015};
    REQUIRE_FALSE(value_converged(wide, 4, 1e-6));
}

TEST_CASE("infinite history entries never count as converged", "[trace]") {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> h = {-inf, -inf, -inf};
    REQUIRE_FALSE(value_converged(h, 3, 1e-6));
}

TEST_CASE("strictly improving history is not converged", "[trace]") {
    std::vector<double> h;
    for (int i = 0; i < 20; ++i) h.push_back(i * 0.5);
    REQUIRE_FALSE(value_converged(h, 10, 1e-6));
    // After it plateaus, the window detects it.
    for (int i = 0; i < 10; ++i) h.push_back(9.5);
    REQUIRE(value_converged(h, 10, 1e-6));
}
