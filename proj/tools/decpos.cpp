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

// decpos: search-based planner harness for decentralized multi-robot
// domains with macro-actions.
//
// Subcommands:
//   solve                 run the configured solver once per seed
//   compare-accel         run the cross-entropy solver per acceleration arm
//   sweep-discretization  discretized solver per bin factor + continuous run
//   evaluate              Monte Carlo value of a serialized policy
//
// The output directory is taken from --out, then the DECPOS_OUT
// environment variable, then ./decpos-out.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decpos/harness/experiment.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const bool digits_only =
            !item.empty() && item.find_first_not_of("0123456789") ==
                                 std::string::npos;
        if (!digits_only)
            throw std::invalid_argument("--seed-list: bad entry \"" + item +
                                        "\"");
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--seed-list: bad entry \"" + item +
                                        "\"");
        }
        seeds.push_back(value);
    }
    if (seeds.empty())
        throw std::invalid_argument("--seed-list: no seeds given");
    return seeds;
}

std::string resolve_out_dir(const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("DECPOS_OUT"))
        if (*env != '\0') return env;
    return "decpos-out";
}

struct SolveArgs {
    std::string config;
    std::string seed_list;
    std::string out;
    int jobs = 1;
};

void add_common_options(CLI::App& cmd, SolveArgs& args) {
    cmd.add_option("--config", args.config, "experiment config file (JSON)")
        ->required();
    cmd.add_option("--seed-list", args.seed_list,
                   "comma-separated seeds overriding the config seed list");
    cmd.add_option("--out", args.out, "output directory");
    cmd.add_option("--jobs", args.jobs,
                   "worker threads for independent runs")
        ->check(CLI::PositiveNumber);
}

decpos::ExperimentConfig load_with_overrides(const SolveArgs& args) {
    decpos::ExperimentConfig cfg =
        decpos::load_experiment_config(args.config);
    if (!args.seed_list.empty()) cfg.seeds = parse_seed_list(args.seed_list);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "decpos: decentralized multi-robot planning with macro-actions"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand(
        "solve", "run the configured solver once per seed");
    add_common_options(*solve, solve_args);

    SolveArgs compare_args;
    CLI::App* compare = app.add_subcommand(
        "compare-accel",
        "run the cross-entropy solver once per (acceleration arm, seed)");
    add_common_options(*compare, compare_args);

    SolveArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep-discretization",
        "discretized solver per bin factor plus a continuous-observation "
        "run");
    add_common_options(*sweep, sweep_args);

    std::string eval_policy, eval_domain, eval_out;
    int eval_traj = 1000;
    std::uint64_t eval_seed = 1;
    long eval_horizon = 25;
    CLI::App* eval = app.add_subcommand(
        "evaluate", "Monte Carlo value of a serialized policy");
    eval->add_option("--policy", eval_policy, "policy file (JSON)")
        ->required();
    eval->add_option("--domain", eval_domain, "domain config file (JSON)")
        ->required();
    eval->add_option("--trajectories", eval_traj,
                     "number of Monte Carlo rollouts")
        ->check(CLI::PositiveNumber);
    eval->add_option("--seed", eval_seed, "evaluation seed");
    eval->add_option("--horizon", eval_horizon, "rollout horizon (steps)")
        ->check(CLI::PositiveNumber);
    eval->add_option("--out", eval_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const auto cfg = load_with_overrides(solve_args);
            const std::string out = resolve_out_dir(solve_args.out);
            decpos::run_solve(cfg, out, solve_args.jobs);
            std::cout << "wrote " << out << "\n";
        } else if (compare->parsed()) {
            const auto cfg = load_with_overrides(compare_args);
            const std::string out = resolve_out_dir(compare_args.out);
            decpos::run_compare_accel(cfg, out, compare_args.jobs);
            std::cout << "wrote " << out << "\n";
        } else if (sweep->parsed()) {
            const auto cfg = load_with_overrides(sweep_args);
            const std::string out = resolve_out_dir(sweep_args.out);
            decpos::run_sweep_discretization(cfg, out, sweep_args.jobs);
            std::cout << "wrote " << out << "\n";
        } else if (eval->parsed()) {
            const std::string out = resolve_out_dir(eval_out);
            const decpos::EvaluateOutcome outcome = decpos::run_evaluate(
                eval_policy, eval_domain, eval_traj, eval_seed, eval_horizon,
                out);
            std::cout << "value " << decpos::format_g17(outcome.mean)
                      << " std_error "
                      << decpos::format_g17(outcome.std_error) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
