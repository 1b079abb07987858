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

#ifndef DECPOS_IO_POLICY_IO_HPP
#define DECPOS_IO_POLICY_IO_HPP

#include <string>
#include <variant>
#include <vector>

#include "decpos/fsa.hpp"
#include "decpos/io/json_util.hpp"
#include "decpos/skfsa.hpp"

namespace decpos {

using AnyPolicy = std::variant<FsaPolicy, SkFsaPolicy>;

namespace detail {

inline Json probs_to_json(const CategoricalParams& row) {
    return Json(row.probs);
}

inline CategoricalParams probs_from_json(const Json& j,
                                         const std::string& where) {
    if (!j.is_array() || j.empty())
        throw SchemaError(where + ": expected a non-empty probability array");
    CategoricalParams row(j.get<std::vector<double>>());
    if (!is_valid_simplex(row))
        throw SchemaError(where + ": probabilities do not form a simplex");
    return row;
}

}  // namespace detail

inline Json policy_to_json(const FsaPolicy& policy) {
    Json j;
    j["format"] = "decpos.policy";
    j["version"] = 1;
    j["kind"] = "fsa";
    j["num_robots"] = policy.num_robots();
    j["num_nodes"] = policy.num_nodes();
    j["shared"] = policy.shared();
    std::vector<int> num_actions;
    for (int i = 0; i < policy.num_robots(); ++i)
        num_actions.push_back(policy.num_actions(i));
    j["num_actions"] = num_actions;
    Json bounds = Json::array();
    for (const Interval& b : policy.grid().bounds())
        bounds.push_back({b.lo, b.hi});
    j["grid"] = {{"factor", policy.grid().factor()}, {"bounds", bounds}};
    Json tables = Json::array();
    for (int t = 0; t < policy.num_tables(); ++t) {
        const FsaTables& tab = policy.tables(t);
        Json action = Json::array(), transition = Json::array();
        for (const auto& row : tab.action)
            action.push_back(detail::probs_to_json(row));
        for (const auto& row : tab.transition)
            transition.push_back(detail::probs_to_json(row));
        tables.push_back({{"action", action}, {"transition", transition}});
    }
    j["tables"] = tables;
    return j;
}

inline Json policy_to_json(const SkFsaPolicy& policy) {
    Json j;
    j["format"] = "decpos.policy";
    j["version"] = 1;
    j["kind"] = "skfsa";
    j["num_robots"] = policy.num_robots();
    j["num_nodes"] = policy.num_nodes();
    std::vector<int> num_actions;
    for (int i = 0; i < policy.num_robots(); ++i)
        num_actions.push_back(policy.num_actions(i));
    j["num_actions"] = num_actions;
    j["sigma"] = policy.sigma();
    j["lambda"] = policy.lambda();
    Json robots = Json::array();
    for (int i = 0; i < policy.num_robots(); ++i) {
        const SkFsaRobot& robot = policy.robot(i);
        Json action = Json::array();
        for (const auto& row : robot.action)
            action.push_back(detail::probs_to_json(row));
        Json transitions = Json::array();
        for (const auto& fn : robot.transition) {
            Json basis = Json::array();
            for (const auto& b : fn.basis()) basis.push_back(b);
            Json weights = Json::array();
            for (Eigen::Index c = 0; c < fn.weights().rows(); ++c) {
                Json wrow = Json::array();
                for (Eigen::Index k = 0; k < fn.weights().cols(); ++k)
                    wrow.push_back(fn.weights()(c, k));
                weights.push_back(std::move(wrow));
            }
            transitions.push_back({{"basis", basis},
                                   {"weights", weights},
                                   {"mixture", fn.mixture()}});
        }
        robots.push_back(
            {{"action", action}, {"transitions", transitions}});
    }
    j["robots"] = robots;
    return j;
}

inline AnyPolicy policy_from_json(const Json& j, const std::string& where) {
    require_format(j, "decpos.policy", 1, where);
    const std::string kind =
        require_key(j, "kind", where).get<std::string>();
    const int num_robots =
        require_key(j, "num_robots", where).get<int>();
    const int num_nodes = require_key(j, "num_nodes", where).get<int>();
    const std::vector<int> num_actions =
        require_key(j, "num_actions", where).get<std::vector<int>>();
    if (static_cast<int>(num_actions.size()) != num_robots)
        throw SchemaError(where + ": num_actions must list one entry per robot");

    if (kind == "fsa") {
        require_keys_subset(j,
                            {"format", "version", "kind", "num_robots",
                             "num_nodes", "shared", "num_actions", "grid",
                             "tables"},
                            where);
        const bool shared = require_key(j, "shared", where).get<bool>();
        const Json& grid_json = require_key(j, "grid", where);
        require_keys_subset(grid_json, {"factor", "bounds"}, where + ".grid");
        const int factor =
            require_key(grid_json, "factor", where + ".grid").get<int>();
        std::vector<Interval> bounds;
        for (const Json& b :
             require_key(grid_json, "bounds", where + ".grid")) {
            if (!b.is_array() || b.size() != 2)
                throw SchemaError(where + ".grid.bounds: expected [lo, hi]");
            bounds.push_back({b[0].get<double>(), b[1].get<double>()});
        }
        FsaPolicy policy;
        try {
            policy = FsaPolicy::uniform(num_robots, num_nodes, num_actions,
                                        ObservationGrid(bounds, factor),
                                        shared);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(where + ": " + e.what());
        }
        const Json& tables = require_key(j, "tables", where);
        if (static_cast<int>(tables.size()) != policy.num_tables())
            throw SchemaError(where + ": wrong number of parameter tables");
        for (int t = 0; t < policy.num_tables(); ++t) {
            const Json& tab = tables[t];
            require_keys_subset(tab, {"action", "transition"},
                                where + ".tables[]");
            const Json& action = require_key(tab, "action", where);
            const Json& transition = require_key(tab, "transition", where);
            FsaTables& dst = policy.tables(t);
            if (action.size() != dst.action.size() ||
                transition.size() != dst.transition.size())
                throw SchemaError(where + ": table row counts do not match "
                                          "num_nodes and the grid");
            for (std::size_t r = 0; r < dst.action.size(); ++r) {
                dst.action[r] = detail::probs_from_json(
                    action[r], where + ".tables[].action");
                if (dst.action[r].size() !=
                    static_cast<std::size_t>(
                        policy.num_actions(shared ? 0 : t)))
                    throw SchemaError(where + ": action row length mismatch");
            }
            for (std::size_t r = 0; r < dst.transition.size(); ++r) {
                dst.transition[r] = detail::probs_from_json(
                    transition[r], where + ".tables[].transition");
                if (dst.transition[r].size() !=
                    static_cast<std::size_t>(num_nodes))
                    throw SchemaError(where +
                                      ": transition row length mismatch");
            }
        }
        return policy;
    }

    if (kind == "skfsa") {
        require_keys_subset(j,
                            {"format", "version", "kind", "num_robots",
                             "num_nodes", "num_actions", "sigma", "lambda",
                             "robots"},
                            where);
        const double sigma = require_key(j, "sigma", where).get<double>();
        const double lambda = require_key(j, "lambda", where).get<double>();
        SkFsaPolicy policy;
        try {
            policy = SkFsaPolicy::uniform(num_robots, num_nodes, num_actions,
                                          sigma, lambda);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(where + ": " + e.what());
        }
        const Json& robots = require_key(j, "robots", where);
        if (static_cast<int>(robots.size()) != num_robots)
            throw SchemaError(where + ": wrong number of robot entries");
        for (int i = 0; i < num_robots; ++i) {
            const Json& rj = robots[i];
            require_keys_subset(rj, {"action", "transitions"},
                                where + ".robots[]");
            SkFsaRobot& robot = policy.robot(i);
            const Json& action = require_key(rj, "action", where);
            if (action.size() != robot.action.size())
                throw SchemaError(where + ": action row count mismatch");
            for (std::size_t r = 0; r < robot.action.size(); ++r) {
                robot.action[r] = detail::probs_from_json(
                    action[r], where + ".robots[].action");
                if (robot.action[r].size() !=
                    static_cast<std::size_t>(num_actions[i]))
                    throw SchemaError(where + ": action row length mismatch");
            }
            const Json& transitions = require_key(rj, "transitions", where);
            if (static_cast<int>(transitions.size()) != num_nodes)
                throw SchemaError(where +
                                  ": transition function count mismatch");
            for (int q = 0; q < num_nodes; ++q) {
                const Json& fj = transitions[q];
                const std::string fw = where + ".robots[].transitions[]";
                require_keys_subset(fj, {"basis", "weights", "mixture"}, fw);
                std::vector<std::vector<double>> basis;
                for (const Json& b : require_key(fj, "basis", fw))
                    basis.push_back(b.get<std::vector<double>>());
                const Json& wj = require_key(fj, "weights", fw);
                if (static_cast<int>(wj.size()) != num_nodes)
                    throw SchemaError(fw + ": weights must have one row per "
                                           "node");
                Eigen::MatrixXd weights(
                    num_nodes, static_cast<Eigen::Index>(basis.size()) + 1);
                for (int c = 0; c < num_nodes; ++c) {
                    const auto wrow = wj[c].get<std::vector<double>>();
                    if (wrow.size() != basis.size() + 1)
                        throw SchemaError(
                            fw + ": weight row length must be |basis|+1");
                    for (std::size_t k = 0; k < wrow.size(); ++k)
                        weights(c, static_cast<Eigen::Index>(k)) = wrow[k];
                }
                const double mixture =
                    require_key(fj, "mixture", fw).get<double>();
                try {
                    robot.transition[q] = KernelTransitionFunction(
                        num_nodes, sigma, std::move(basis),
                        std::move(weights), mixture);
                } catch (const std::invalid_argument& e) {
                    throw SchemaError(fw + ": " + e.what());
                }
            }
        }
        return policy;
    }

    throw SchemaError(where + ": unknown policy kind \"" + kind + "\"");
}

inline void save_policy_file(const std::string& path,
                             const AnyPolicy& policy) {
    std::visit(
        [&](const auto& p) { save_json_file(path, policy_to_json(p)); },
        policy);
}

inline AnyPolicy load_policy_file(const std::string& path) {
    return policy_from_json(load_json_file(path), path);
}

}  // namespace decpos

#endif
