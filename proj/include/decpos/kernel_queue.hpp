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

#ifndef DECPOS_KERNEL_QUEUE_HPP
#define DECPOS_KERNEL_QUEUE_HPP

#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

namespace decpos {

/// One observed node transition of one robot: at node `node`, observation
/// `observation` led the controller to `next_node`.
struct TransitionSample {
    int node = 0;
    std::vector<double> observation;
    int next_node = 0;
};

/// All transition samples harvested from one iteration's elite trajectories
/// for one robot.
struct ObservationBundle {
    std::vector<TransitionSample> samples;
    long iteration = 0;
};

/// Keeps the most recent `capacity` bundles of one robot; pushing beyond
/// capacity evicts the oldest bundle.
class FifoKernelQueue {
  public:
    FifoKernelQueue() = default;

    explicit FifoKernelQueue(int capacity) : capacity_(capacity) {
        if (capacity < 1)
            throw std::invalid_argument(
                "FifoKernelQueue: capacity must be >= 1");
    }

    int capacity() const { return capacity_; }
    int size() const { return static_cast<int>(bundles_.size()); }

    void push(ObservationBundle bundle) {
        bundles_.push_back(std::move(bundle));
        if (static_cast<int>(bundles_.size()) > capacity_)
            bundles_.pop_front();
    }

    /// Bundle at position b, 0 = oldest.
    const ObservationBundle& bundle(int b) const { return bundles_.at(b); }

  private:
    int capacity_ = 1;
    std::deque<ObservationBundle> bundles_;
};

/// Training weight of each bundle in a queue of effective length `count`,
/// oldest first:
///   w_1 = (1 - alpha)^(count-1),   w_b = alpha * (1 - alpha)^(count-b).
/// The weights arise from unrolling the smoothed parameter update across
/// iterations and always sum to 1.
inline std::vector<double> bundle_weights(int count, double alpha) {
    if (count < 1)
        throw std::invalid_argument("bundle_weights: count must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("bundle_weights: alpha must be in (0,1]");
    std::vector<double> w(count);
    w[0] = std::pow(1.0 - alpha, count - 1);
    for (int b = 2; b <= count; ++b)
        w[b - 1] = alpha * std::pow(1.0 - alpha, count - b);
    return w;
}

}  // namespace decpos

#endif
