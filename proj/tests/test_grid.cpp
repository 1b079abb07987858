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

#include "decpos/grid.hpp"

using namespace decpos;

TEST_CASE("1-D binning with factor 2 over [0,1]", "[grid]") {
    ObservationGrid grid({{0.0, 1.0}}, 2);
    REQUIRE(grid.dim() == 1);
    REQUIRE(grid.num_bins() == 2);
    REQUIRE(grid.bin_of(std::vector<double>{0.0}) == 0);
    REQUIRE(grid.bin_of(std::vector<double>{0.49}) == 0);
    REQUIRE(grid.bin_of(std::vector<double>{0.5}) == 1);
    REQUIRE(grid.bin_of(std::vector<double>{1.0}) == 1);
}

TEST_CASE("boundary and out-of-range values clamp", "[grid]") {
    ObservationGrid grid({{-1.0, 3.0}}, 4);
    REQUIRE(grid.bin_of(std::vector<double>{-1.0}) == 0);
    REQUIRE(grid.bin_of(std::vector<double>{-5.0}) == 0);
    REQUIRE(grid.bin_of(std::vector<double>{3.0}) == 3);
    REQUIRE(grid.bin_of(std::vector<double>{99.0}) == 3);
    // Interior cell edges: cell width 1, cells [-1,0), [0,1), [1,2), [2,3].
    REQUIRE(grid.bin_of(std::vector<double>{0.0}) == 1);
    REQUIRE(grid.bin_of(std::vector<double>{1.999}) == 2);
}

TEST_CASE("row-major composite index in 2-D", "[grid]") {
    ObservationGrid grid({{0.0, 1.0}, {0.0, 1.0}}, 3);
    REQUIRE(grid.num_bins() == 9);
    // index = cell0 * 3 + cell1
    REQUIRE(grid.bin_of(std::vector<double>{0.1, 0.1}) == 0);
    REQUIRE(grid.bin_of(std::vector<double>{0.1, 0.9}) == 2);
    REQUIRE(grid.bin_of(std::vector<double>{0.5, 0.1}) == 3);
    REQUIRE(grid.bin_of(std::vector<double>{0.9, 0.9}) == 8);
}

TEST_CASE("factor 1 collapses everything to one bin", "[grid]") {
    ObservationGrid grid({{0.0, 5.0}, {0.0, 5.0}}, 1);
    REQUIRE(grid.num_bins() == 1);
    REQUIRE(grid.bin_of(std::vector<double>{4.2, 0.3}) == 0);
}

TEST_CASE("grid rejects bad inputs", "[grid]") {
    REQUIRE_THROWS_AS(ObservationGrid({{0.0, 1.0}}, 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(ObservationGrid({}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(ObservationGrid({{1.0, 1.0}}, 2),
                      std::invalid_argument);
    ObservationGrid grid({{0.0, 1.0}}, 2);
    REQUIRE_THROWS_AS(grid.bin_of(std::vector<double>{0.1, 0.2}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        grid.bin_of(std::vector<double>{
            std::numeric_limits<double>::quiet_NaN()}),
        std::invalid_argument);
}
