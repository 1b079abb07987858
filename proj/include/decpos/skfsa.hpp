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

#ifndef DECPOS_SKFSA_HPP
#define DECPOS_SKFSA_HPP

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "decpos/categorical.hpp"
#include "decpos/klr.hpp"
#include "decpos/rng.hpp"

namespace decpos {

/// One robot's stochastic kernel-based FSA: a macro-action distribution per
/// node and a kernel logistic-regression transition function per node.
struct SkFsaRobot {
    std::vector<CategoricalParams> action;
    std::vector<KernelTransitionFunction> transition;
};

/// Team policy of stochastic kernel-based FSAs over continuous observations.
/// Both macro-action selection and node transitions are sampled.
class SkFsaPolicy {
  public:
    SkFsaPolicy() = default;

    /// Uniform macro-action rows and untrained (uniform) transitions.
    static SkFsaPolicy uniform(int num_robots, int num_nodes,
                               std::vector<int> num_actions, double sigma,
                               double lambda) {
        if (num_robots < 1)
            throw std::invalid_argument("SkFsaPolicy: num_robots must be >= 1");
        if (num_nodes < 1)
            throw std::invalid_argument("SkFsaPolicy: num_nodes must be >= 1");
        if (static_cast<int>(num_actions.size()) != num_robots)
            throw std::invalid_argument(
                "SkFsaPolicy: need one action count per robot");
        SkFsaPolicy p;
        p.num_robots_ = num_robots;
        p.num_nodes_ = num_nodes;
        p.num_actions_ = std::move(num_actions);
        p.sigma_ = sigma;
        p.lambda_ = lambda;
        p.robots_.resize(num_robots);
        for (int i = 0; i < num_robots; ++i) {
            p.robots_[i].action.assign(num_nodes,
                                       uniform_categorical(p.num_actions_[i]));
            p.robots_[i].transition.assign(
                num_nodes, KernelTransitionFunction(num_nodes, sigma));
        }
        return p;
    }

    int num_robots() const { return num_robots_; }
    int num_nodes() const { return num_nodes_; }
    int num_actions(int robot) const { return num_actions_.at(robot); }
    double sigma() const { return sigma_; }
    double lambda() const { return lambda_; }

    SkFsaRobot& robot(int i) { return robots_.at(i); }
    const SkFsaRobot& robot(int i) const { return robots_.at(i); }

    int select_action(int robot_id, int node, RngStream& rng) const {
        check_node(node);
        return sample(robots_.at(robot_id).action[node], rng);
    }

    int transition(int robot_id, int node, std::span<const double> obs,
                   RngStream& rng) const {
        check_node(node);
        return sample(robots_.at(robot_id).transition[node].predict(obs), rng);
    }

  private:
    void check_node(int node) const {
        if (node < 0 || node >= num_nodes_)
            throw std::out_of_range("SkFsaPolicy: node index out of range");
    }

    int num_robots_ = 0;
    int num_nodes_ = 0;
    std::vector<int> num_actions_;
    double sigma_ = 1.0;
    double lambda_ = 1e-3;
    std::vector<SkFsaRobot> robots_;
};

}  // namespace decpos

#endif
