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

#ifndef DECPOS_IO_DOMAIN_CONFIG_HPP
#define DECPOS_IO_DOMAIN_CONFIG_HPP

#include <string>
#include <variant>

#include "decpos/domains/grid_bench.hpp"
#include "decpos/domains/nuclear.hpp"
#include "decpos/domains/tiny.hpp"
#include "decpos/io/json_util.hpp"

namespace decpos {

/// Any of the shipped generative domains; dispatch with std::visit.
using AnyDomain = std::variant<TinyDomain, GridBenchmarkDomain, NuclearDomain>;

inline std::string domain_kind(const AnyDomain& d) {
    return std::visit(
        [](const auto& dom) -> std::string {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, TinyDomain>) return "tiny";
            else if constexpr (std::is_same_v<T, GridBenchmarkDomain>)
                return "grid-benchmark";
            else
                return "nuclear";
        },
        d);
}

namespace detail {

template <typename T>
void read_field(const Json& obj, const char* key, T& out) {
    auto it = obj.find(key);
    if (it != obj.end()) out = it->get<T>();
}

inline TinyConfig parse_tiny(const Json& p, const std::string& where) {
    require_keys_subset(
        p, {"advance_prob", "collect_reward", "gamma", "obs_noise"}, where);
    TinyConfig cfg;
    read_field(p, "advance_prob", cfg.advance_prob);
    read_field(p, "collect_reward", cfg.collect_reward);
    read_field(p, "gamma", cfg.gamma);
    read_field(p, "obs_noise", cfg.obs_noise);
    return cfg;
}

inline GridBenchmarkConfig parse_grid(const Json& p,
                                      const std::string& where) {
    require_keys_subset(p,
                        {"movement_noise", "push_success", "obs_sigma",
                         "gamma", "goal_reward"},
                        where);
    GridBenchmarkConfig cfg;
    read_field(p, "movement_noise", cfg.movement_noise);
    read_field(p, "push_success", cfg.push_success);
    read_field(p, "obs_sigma", cfg.obs_sigma);
    read_field(p, "gamma", cfg.gamma);
    read_field(p, "goal_reward", cfg.goal_reward);
    return cfg;
}

inline Disc parse_disc(const Json& j, const std::string& where) {
    require_keys_subset(j, {"cx", "cy", "r"}, where);
    Disc d;
    d.cx = require_key(j, "cx", where).get<double>();
    d.cy = require_key(j, "cy", where).get<double>();
    d.r = require_key(j, "r", where).get<double>();
    return d;
}

inline Rect parse_rect(const Json& j, const std::string& where) {
    require_keys_subset(j, {"x0", "x1", "y0", "y1"}, where);
    Rect r;
    r.x0 = require_key(j, "x0", where).get<double>();
    r.x1 = require_key(j, "x1", where).get<double>();
    r.y0 = require_key(j, "y0", where).get<double>();
    r.y1 = require_key(j, "y1", where).get<double>();
    return r;
}

inline NuclearConfig parse_nuclear(const Json& p, const std::string& where) {
    require_keys_subset(p,
                        {"num_robots", "workspace", "failure_prob",
                         "duration_min", "duration_max", "obs_sigma", "gamma",
                         "collect_reward", "reward_at_deposit", "base",
                         "waste_zones", "small_zones"},
                        where);
    NuclearConfig cfg;
    read_field(p, "num_robots", cfg.num_robots);
    read_field(p, "workspace", cfg.workspace);
    read_field(p, "failure_prob", cfg.failure_prob);
    read_field(p, "duration_min", cfg.duration_min);
    read_field(p, "duration_max", cfg.duration_max);
    read_field(p, "obs_sigma", cfg.obs_sigma);
    read_field(p, "gamma", cfg.gamma);
    read_field(p, "collect_reward", cfg.collect_reward);
    read_field(p, "reward_at_deposit", cfg.reward_at_deposit);
    if (p.contains("base")) cfg.base = parse_disc(p["base"], where + ".base");
    if (p.contains("waste_zones")) {
        cfg.waste_zones.clear();
        for (const Json& z : p["waste_zones"])
            cfg.waste_zones.push_back(
                parse_rect(z, where + ".waste_zones[]"));
    }
    if (p.contains("small_zones")) {
        cfg.small_zones.clear();
        for (const Json& z : p["small_zones"])
            cfg.small_zones.push_back(
                parse_disc(z, where + ".small_zones[]"));
    }
    return cfg;
}

}  // namespace detail

/// Parses a versioned domain configuration document. Omitted parameters use
/// the domain's defaults; unknown keys are errors.
inline AnyDomain parse_domain_config(const Json& j,
                                     const std::string& where) {
    require_format(j, "decpos.domain", 1, where);
    require_keys_subset(j, {"format", "version", "kind", "params"}, where);
    const std::string kind =
        require_key(j, "kind", where).get<std::string>();
    const Json params =
        j.contains("params") ? j["params"] : Json::object();
    const std::string pw = where + ".params";
    if (kind == "tiny") return TinyDomain(detail::parse_tiny(params, pw));
    if (kind == "grid-benchmark")
        return GridBenchmarkDomain(detail::parse_grid(params, pw));
    if (kind == "nuclear")
        return NuclearDomain(detail::parse_nuclear(params, pw));
    throw SchemaError(where + ": unknown domain kind \"" + kind + "\"");
}

inline AnyDomain load_domain_config(const std::string& path) {
    return parse_domain_config(load_json_file(path), path);
}

}  // namespace decpos

#endif
