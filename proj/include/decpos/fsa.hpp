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

#ifndef DECPOS_FSA_HPP
#define DECPOS_FSA_HPP

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "decpos/categorical.hpp"
#include "decpos/grid.hpp"
#include "decpos/rng.hpp"

namespace decpos {

/// One robot's finite-state-automaton parameter tables: a macro-action
/// distribution per node and a next-node distribution per (node, observation
/// bin). Rows are indexed node-major: transition[node * n_bins + bin].
struct FsaTables {
    std::vector<CategoricalParams> action;
    std::vector<CategoricalParams> transition;
};

/// Team policy of stochastic FSAs over a discretized observation space.
///
/// Holds one FsaTables per robot, or a single table set shared by the whole
/// team when constructed with shared=true (homogeneous team). A deterministic
/// controller is the special case where every row is a point mass.
class FsaPolicy {
  public:
    FsaPolicy() = default;

    /// All rows initialized to uniform distributions.
    static FsaPolicy uniform(int num_robots, int num_nodes,
                             std::vector<int> num_actions,
                             ObservationGrid grid, bool shared = false) {
        if (num_robots < 1)
            throw std::invalid_argument("FsaPolicy: num_robots must be >= 1");
        if (num_nodes < 1)
            throw std::invalid_argument("FsaPolicy: num_nodes must be >= 1");
        if (static_cast<int>(num_actions.size()) != num_robots)
            throw std::invalid_argument(
                "FsaPolicy: need one action count per robot");
        if (shared) {
            for (int a : num_actions)
                if (a != num_actions[0])
                    throw std::invalid_argument(
                        "FsaPolicy: shared tables require identical action "
                        "sets");
        }
        FsaPolicy p;
        p.num_robots_ = num_robots;
        p.num_nodes_ = num_nodes;
        p.num_actions_ = std::move(num_actions);
        p.grid_ = std::move(grid);
        p.shared_ = shared;
        const int sets = shared ? 1 : num_robots;
        p.tables_.resize(sets);
        for (int t = 0; t < sets; ++t) {
            auto& tab = p.tables_[t];
            tab.action.assign(num_nodes,
                              uniform_categorical(p.num_actions_[t]));
            tab.transition.assign(
                static_cast<std::size_t>(num_nodes) * p.grid_.num_bins(),
                uniform_categorical(num_nodes));
        }
        return p;
    }

    int num_robots() const { return num_robots_; }
    int num_nodes() const { return num_nodes_; }
    int num_actions(int robot) const { return num_actions_.at(robot); }
    bool shared() const { return shared_; }
    const ObservationGrid& grid() const { return grid_; }

    /// Number of independent parameter sets (1 if shared, else num_robots).
    int num_tables() const { return static_cast<int>(tables_.size()); }
    int table_index(int robot) const { return shared_ ? 0 : robot; }
    FsaTables& tables(int index) { return tables_.at(index); }
    const FsaTables& tables(int index) const { return tables_.at(index); }

    const CategoricalParams& action_dist(int robot, int node) const {
        return tables_.at(table_index(robot)).action.at(node);
    }
    const CategoricalParams& transition_dist(int robot, int node,
                                             long bin) const {
        return tables_.at(table_index(robot))
            .transition.at(static_cast<std::size_t>(node) * grid_.num_bins() +
                           bin);
    }

    int select_action(int robot, int node, RngStream& rng) const {
        check_node(node);
        return sample(action_dist(robot, node), rng);
    }

    int transition(int robot, int node, std::span<const double> obs,
                   RngStream& rng) const {
        check_node(node);
        const long bin = grid_.bin_of(obs);
        return sample(transition_dist(robot, node, bin), rng);
    }

  private:
    void check_node(int node) const {
        if (node < 0 || node >= num_nodes_)
            throw std::out_of_range("FsaPolicy: node index out of range");
    }

    int num_robots_ = 0;
    int num_nodes_ = 0;
    std::vector<int> num_actions_;
    ObservationGrid grid_;
    bool shared_ = false;
    std::vector<FsaTables> tables_;
};

/// One robot's deterministic FSA: an action per node and a next node per
/// (node, bin).
struct FsaAssignmentTables {
    std::vector<int> action;
    std::vector<int> next;  // [node * n_bins + bin]
};

/// Deterministic team controller drawn from an FsaPolicy. Lightweight value
/// type used during search; convertible back to a point-mass FsaPolicy.
class FsaAssignment {
  public:
    FsaAssignment() = default;

    FsaAssignment(int num_robots, int num_nodes, std::vector<int> num_actions,
                  ObservationGrid grid, bool shared,
                  std::vector<FsaAssignmentTables> tables)
        : num_robots_(num_robots),
          num_nodes_(num_nodes),
          num_actions_(std::move(num_actions)),
          grid_(std::move(grid)),
          shared_(shared),
          tables_(std::move(tables)) {}

    int num_robots() const { return num_robots_; }
    int num_nodes() const { return num_nodes_; }
    const ObservationGrid& grid() const { return grid_; }
    int table_index(int robot) const { return shared_ ? 0 : robot; }
    const std::vector<FsaAssignmentTables>& tables() const { return tables_; }

    int select_action(int robot, int node, RngStream&) const {
        check_node(node);
        return tables_.at(table_index(robot)).action[node];
    }

    int transition(int robot, int node, std::span<const double> obs,
                   RngStream&) const {
        check_node(node);
        const long bin = grid_.bin_of(obs);
        return tables_.at(table_index(robot))
            .next[static_cast<std::size_t>(node) * grid_.num_bins() + bin];
    }

    /// Point-mass stochastic policy realizing this controller.
    FsaPolicy to_policy() const {
        FsaPolicy p = FsaPolicy::uniform(num_robots_, num_nodes_, num_actions_,
                                         grid_, shared_);
        for (int t = 0; t < p.num_tables(); ++t) {
            auto& tab = p.tables(t);
            const auto& det = tables_.at(t);
            for (int q = 0; q < num_nodes_; ++q)
                tab.action[q] = point_mass(num_actions_[t], det.action[q]);
            for (std::size_t row = 0; row < tab.transition.size(); ++row)
                tab.transition[row] = point_mass(num_nodes_, det.next[row]);
        }
        return p;
    }

  private:
    void check_node(int node) const {
        if (node < 0 || node >= num_nodes_)
            throw std::out_of_range("FsaAssignment: node index out of range");
    }

    int num_robots_ = 0;
    int num_nodes_ = 0;
    std::vector<int> num_actions_;
    ObservationGrid grid_;
    bool shared_ = false;
    std::vector<FsaAssignmentTables> tables_;
};

}  // namespace decpos

#endif
