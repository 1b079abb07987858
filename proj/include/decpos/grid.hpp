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

#ifndef DECPOS_GRID_HPP
#define DECPOS_GRID_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "decpos/domain.hpp"

namespace decpos {

/// Uniform discretization of a continuous box-shaped observation space into
/// factor^dim axis-aligned cells, indexed row-major (the first dimension
/// varies slowest). Values on or outside the boundary clamp to the nearest
/// cell, so every in-bounds observation maps to a valid bin.
class ObservationGrid {
  public:
    ObservationGrid() = default;

    ObservationGrid(std::vector<Interval> bounds, int factor)
        : bounds_(std::move(bounds)), factor_(factor) {
        if (factor_ < 1)
            throw std::invalid_argument(
                "ObservationGrid: factor must be >= 1");
        if (bounds_.empty())
            throw std::invalid_argument(
                "ObservationGrid: bounds must be non-empty");
        num_bins_ = 1;
        for (const auto& b : bounds_) {
            if (!(b.hi > b.lo))
                throw std::invalid_argument(
                    "ObservationGrid: each bound must have hi > lo");
            num_bins_ *= factor_;
        }
    }

    int dim() const { return static_cast<int>(bounds_.size()); }
    int factor() const { return factor_; }
    long num_bins() const { return num_bins_; }
    const std::vector<Interval>& bounds() const { return bounds_; }

    /// Row-major cell index of an observation. NaN components are rejected;
    /// finite out-of-range components clamp to the boundary cell.
    long bin_of(std::span<const double> obs) const {
        if (static_cast<int>(obs.size()) != dim())
            throw std::invalid_argument(
                "ObservationGrid: observation has wrong dimension");
        long index = 0;
        for (int d = 0; d < dim(); ++d) {
            const double x = obs[d];
            if (std::isnan(x))
                throw std::invalid_argument(
                    "ObservationGrid: observation component is NaN");
            const auto& b = bounds_[d];
            int cell = static_cast<int>(
                std::floor((x - b.lo) / b.width() * factor_));
            if (cell < 0) cell = 0;
            if (cell >= factor_) cell = factor_ - 1;
            index = index * factor_ + cell;
        }
        return index;
    }

  private:
    std::vector<Interval> bounds_;
    int factor_ = 1;
    long num_bins_ = 1;
};

}  // namespace decpos

#endif
