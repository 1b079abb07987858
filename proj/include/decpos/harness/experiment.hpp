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

#ifndef DECPOS_HARNESS_EXPERIMENT_HPP
#define DECPOS_HARNESS_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "decpos/epscko.hpp"
#include "decpos/gdice.hpp"
#include "decpos/io/csv.hpp"
#include "decpos/io/domain_config.hpp"
#include "decpos/io/json_util.hpp"
#include "decpos/io/policy_io.hpp"

namespace decpos {

/// One acceleration-scheme arm of a comparison experiment.
struct SchemeEntry {
    std::string label;
    double alpha = 0.2;
    AccelerationScheme acceleration = NoAcceleration{};
};

struct SweepSpec {
    std::vector<int> discretizations;
    std::vector<SchemeEntry> schemes;
};

/// A parsed experiment file: the domain, solver settings, and the seed list.
struct ExperimentConfig {
    std::string domain_path;
    AnyDomain domain;
    std::string solver = "gdice";
    std::vector<std::uint64_t> seeds;
    int final_eval_trajectories = 1000;
    GdiceConfig gdice;
    EpsckoConfig epscko;
    SweepSpec sweep;
};

namespace detail {

inline AccelerationScheme parse_acceleration(const Json& j,
                                             const std::string& where) {
    const std::string kind =
        require_key(j, "kind", where).get<std::string>();
    if (kind == "none") {
        require_keys_subset(j, {"kind"}, where);
        return NoAcceleration{};
    }
    if (kind == "dynamic-smoothing") {
        require_keys_subset(j, {"kind", "alpha0", "beta"}, where);
        DynamicSmoothing s;
        read_field(j, "alpha0", s.alpha0);
        read_field(j, "beta", s.beta);
        return s;
    }
    if (kind == "noise-injection") {
        require_keys_subset(j, {"kind", "omega_max", "rate"}, where);
        NoiseInjection s;
        read_field(j, "omega_max", s.omega_max);
        read_field(j, "rate", s.rate);
        return s;
    }
    if (kind == "max-entropy-injection") {
        require_keys_subset(j, {"kind", "alpha_ei", "tau_h"}, where);
        MaxEntropyInjection s;
        read_field(j, "alpha_ei", s.alpha_ei);
        read_field(j, "tau_h", s.tau_h);
        return s;
    }
    throw SchemaError(where + ": unknown acceleration kind \"" + kind +
                      "\"");
}

inline void parse_gdice(const Json& j, const std::string& where,
                        GdiceConfig& cfg) {
    require_keys_subset(j,
                        {"nodes", "iterations", "samples", "elites", "alpha",
                         "horizon", "eval_trajectories", "discretization",
                         "acceleration", "window", "tolerance",
                         "share_weights"},
                        where);
    read_field(j, "nodes", cfg.num_nodes);
    read_field(j, "iterations", cfg.iterations);
    read_field(j, "samples", cfg.samples);
    read_field(j, "elites", cfg.elites);
    read_field(j, "alpha", cfg.alpha);
    read_field(j, "horizon", cfg.horizon);
    read_field(j, "eval_trajectories", cfg.eval_trajectories);
    read_field(j, "discretization", cfg.discretization);
    read_field(j, "window", cfg.window);
    read_field(j, "tolerance", cfg.tolerance);
    read_field(j, "share_weights", cfg.share_weights);
    if (j.contains("acceleration"))
        cfg.acceleration =
            parse_acceleration(j["acceleration"], where + ".acceleration");
}

inline void parse_epscko(const Json& j, const std::string& where,
                         EpsckoConfig& cfg) {
    require_keys_subset(j,
                        {"nodes", "iterations", "samples", "elites",
                         "queue_length", "alpha", "alpha_ei", "sigma",
                         "lambda", "horizon", "sample_trajectories",
                         "window", "tolerance", "tau_h"},
                        where);
    read_field(j, "nodes", cfg.num_nodes);
    read_field(j, "iterations", cfg.iterations);
    read_field(j, "samples", cfg.samples);
    read_field(j, "elites", cfg.elites);
    read_field(j, "queue_length", cfg.queue_length);
    read_field(j, "alpha", cfg.alpha);
    read_field(j, "alpha_ei", cfg.alpha_ei);
    read_field(j, "sigma", cfg.sigma);
    read_field(j, "lambda", cfg.lambda);
    read_field(j, "horizon", cfg.horizon);
    read_field(j, "sample_trajectories", cfg.sample_trajectories);
    read_field(j, "window", cfg.window);
    read_field(j, "tolerance", cfg.tolerance);
    read_field(j, "tau_h", cfg.tau_h);
}

}  // namespace detail

inline ExperimentConfig load_experiment_config(const std::string& path) {
    const Json j = load_json_file(path);
    require_format(j, "decpos.experiment", 1, path);
    require_keys_subset(j,
                        {"format", "version", "domain", "solver", "seeds",
                         "final_eval_trajectories", "gdice", "epscko",
                         "sweep"},
                        path);
    ExperimentConfig cfg;

    const std::string domain_ref =
        require_key(j, "domain", path).get<std::string>();
    std::filesystem::path domain_path(domain_ref);
    if (domain_path.is_relative())
        domain_path = std::filesystem::path(path).parent_path() / domain_path;
    cfg.domain_path = domain_path.string();
    cfg.domain = load_domain_config(cfg.domain_path);

    detail::read_field(j, "solver", cfg.solver);
    if (cfg.solver != "gdice" && cfg.solver != "epscko")
        throw SchemaError(path + ": solver must be \"gdice\" or \"epscko\"");
    cfg.seeds = require_key(j, "seeds", path)
                    .get<std::vector<std::uint64_t>>();
    if (cfg.seeds.empty())
        throw SchemaError(path + ": seeds must be non-empty");
    detail::read_field(j, "final_eval_trajectories",
                       cfg.final_eval_trajectories);
    if (cfg.final_eval_trajectories < 1)
        throw SchemaError(path + ": final_eval_trajectories must be >= 1");

    if (j.contains("gdice"))
        detail::parse_gdice(j["gdice"], path + ".gdice", cfg.gdice);
    if (j.contains("epscko"))
        detail::parse_epscko(j["epscko"], path + ".epscko", cfg.epscko);
    cfg.epscko.eval_trajectories = cfg.final_eval_trajectories;

    if (j.contains("sweep")) {
        const Json& s = j["sweep"];
        require_keys_subset(s, {"discretizations", "schemes"},
                            path + ".sweep");
        if (s.contains("discretizations"))
            cfg.sweep.discretizations =
                s["discretizations"].get<std::vector<int>>();
        if (s.contains("schemes")) {
            for (const Json& e : s["schemes"]) {
                const std::string ew = path + ".sweep.schemes[]";
                require_keys_subset(e, {"label", "alpha", "acceleration"},
                                    ew);
                SchemeEntry entry;
                entry.label =
                    require_key(e, "label", ew).get<std::string>();
                entry.alpha = cfg.gdice.alpha;
                detail::read_field(e, "alpha", entry.alpha);
                entry.acceleration =
                    e.contains("acceleration")
                        ? detail::parse_acceleration(e["acceleration"],
                                                     ew + ".acceleration")
                        : AccelerationScheme(NoAcceleration{});
                cfg.sweep.schemes.push_back(std::move(entry));
            }
        }
    }
    return cfg;
}

/// One solver run: (solver, scheme, discretization, seed).
struct CellSpec {
    std::string solver;       // "gdice" or "epscko"
    std::string scheme_label;
    std::string d_label;      // discretization factor or "continuous"
    std::uint64_t seed = 0;
    GdiceConfig gdice;
    EpsckoConfig epscko;
    int final_eval_trajectories = 1000;
    std::string policy_filename;
};

struct CellResult {
    SearchTrace trace;
    AnyPolicy policy;
    double search_best_value = 0.0;
    double final_value = 0.0;
    double final_std_error = 0.0;
    long wall_ms = 0;
};

namespace detail {

inline CellResult run_cell(const AnyDomain& domain, const CellSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    CellResult result = std::visit(
        [&](const auto& dom) -> CellResult {
            CellResult r;
            if (spec.solver == "gdice") {
                GdiceResult g = gdice_search(dom, spec.gdice, spec.seed);
                const ValueEstimate final_est = evaluate(
                    dom, g.best_policy, spec.final_eval_trajectories,
                    spec.gdice.horizon,
                    derive_stream(spec.seed, streams::kFinalEvaluate));
                r.trace = std::move(g.trace);
                r.policy = std::move(g.best_policy);
                r.search_best_value = g.best_value;
                r.final_value = final_est.mean;
                r.final_std_error = final_est.std_error;
            } else {
                EpsckoResult e = epscko_search(dom, spec.epscko, spec.seed);
                const ValueEstimate final_est = evaluate(
                    dom, e.best_policy, spec.final_eval_trajectories,
                    spec.epscko.horizon,
                    derive_stream(spec.seed, streams::kFinalEvaluate));
                r.trace = std::move(e.trace);
                r.policy = std::move(e.best_policy);
                r.search_best_value = e.best_value;
                r.final_value = final_est.mean;
                r.final_std_error = final_est.std_error;
            }
            return r;
        },
        domain);
    result.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return result;
}

inline std::vector<CellResult> run_cells(const AnyDomain& domain,
                                         const std::vector<CellSpec>& specs,
                                         int jobs) {
    std::vector<CellResult> results(specs.size());
    if (jobs <= 1 || specs.size() <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i)
            results[i] = run_cell(domain, specs[i]);
        return results;
    }
    std::vector<std::exception_ptr> errors(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            try {
                results[i] = run_cell(domain, specs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(
        static_cast<std::size_t>(jobs), specs.size());
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

/// Writes the per-iteration trace table. Column order is fixed; reruns of
/// the same configuration produce byte-identical files (wall-clock data
/// lives in the summary instead).
inline void write_results_csv(const std::filesystem::path& path,
                              const std::vector<CellSpec>& specs,
                              const std::vector<CellResult>& results) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file: " + path.string());
    out << "solver,scheme,d,seed,iteration,best_value,worst_elite,injected\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (const TraceRow& row : results[i].trace.rows) {
            out << specs[i].solver << ',' << specs[i].scheme_label << ','
                << specs[i].d_label << ',' << specs[i].seed << ','
                << row.iteration << ',' << format_g17(row.best_value) << ','
                << format_g17(row.worst_elite) << ','
                << (row.injected ? 1 : 0) << '\n';
        }
    }
}

inline void write_summary(const std::filesystem::path& path,
                          const std::vector<CellSpec>& specs,
                          const std::vector<CellResult>& results) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file: " + path.string());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        out << "solver=" << specs[i].solver
            << " scheme=" << specs[i].scheme_label
            << " d=" << specs[i].d_label << " seed=" << specs[i].seed
            << " search_best=" << format_g17(results[i].search_best_value)
            << " final_value=" << format_g17(results[i].final_value)
            << " final_std_error="
            << format_g17(results[i].final_std_error)
            << " policy=" << specs[i].policy_filename
            << " wall_ms=" << results[i].wall_ms << '\n';
    }
}

inline void write_outputs(const std::filesystem::path& out_dir,
                          const std::vector<CellSpec>& specs,
                          const std::vector<CellResult>& results) {
    std::filesystem::create_directories(out_dir / "policies");
    write_results_csv(out_dir / "results.csv", specs, results);
    write_summary(out_dir / "summary.txt", specs, results);
    for (std::size_t i = 0; i < specs.size(); ++i)
        save_policy_file(
            (out_dir / "policies" / specs[i].policy_filename).string(),
            results[i].policy);
}

inline std::string scheme_label_for(const GdiceConfig& cfg) {
    return scheme_name(cfg.acceleration);
}

}  // namespace detail

/// Runs the configured solver once per seed; writes results.csv,
/// summary.txt, and one policy file per seed under out_dir.
inline void run_solve(const ExperimentConfig& cfg,
                      const std::filesystem::path& out_dir, int jobs) {
    std::vector<CellSpec> specs;
    for (std::uint64_t seed : cfg.seeds) {
        CellSpec spec;
        spec.solver = cfg.solver;
        spec.seed = seed;
        spec.gdice = cfg.gdice;
        spec.epscko = cfg.epscko;
        spec.final_eval_trajectories = cfg.final_eval_trajectories;
        if (cfg.solver == "gdice") {
            spec.scheme_label = detail::scheme_label_for(cfg.gdice);
            spec.d_label = std::to_string(cfg.gdice.discretization);
        } else {
            spec.scheme_label =
                cfg.epscko.alpha_ei > 0.0 ? "max-entropy-injection" : "none";
            spec.d_label = "continuous";
        }
        spec.policy_filename =
            cfg.solver + "-seed" + std::to_string(seed) + ".json";
        specs.push_back(std::move(spec));
    }
    const std::vector<CellResult> results =
        detail::run_cells(cfg.domain, specs, jobs);
    detail::write_outputs(out_dir, specs, results);
}

/// Runs G-DICE once per (scheme, seed) over the configured scheme list.
inline void run_compare_accel(const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir,
                              int jobs) {
    if (cfg.sweep.schemes.empty())
        throw SchemaError(
            "compare-accel requires a non-empty sweep.schemes list");
    std::vector<CellSpec> specs;
    for (const SchemeEntry& entry : cfg.sweep.schemes) {
        for (std::uint64_t seed : cfg.seeds) {
            CellSpec spec;
            spec.solver = "gdice";
            spec.seed = seed;
            spec.gdice = cfg.gdice;
            spec.gdice.alpha = entry.alpha;
            spec.gdice.acceleration = entry.acceleration;
            spec.epscko = cfg.epscko;
            spec.final_eval_trajectories = cfg.final_eval_trajectories;
            spec.scheme_label = entry.label;
            spec.d_label = std::to_string(spec.gdice.discretization);
            spec.policy_filename =
                "gdice-" + entry.label + "-seed" + std::to_string(seed) +
                ".json";
            specs.push_back(std::move(spec));
        }
    }
    const std::vector<CellResult> results =
        detail::run_cells(cfg.domain, specs, jobs);
    detail::write_outputs(out_dir, specs, results);
}

/// Runs G-DICE once per (discretization, seed) and the continuous solver
/// once per seed.
inline void run_sweep_discretization(const ExperimentConfig& cfg,
                                     const std::filesystem::path& out_dir,
                                     int jobs) {
    if (cfg.sweep.discretizations.empty())
        throw SchemaError(
            "sweep-discretization requires a non-empty "
            "sweep.discretizations list");
    std::vector<CellSpec> specs;
    for (int d : cfg.sweep.discretizations) {
        for (std::uint64_t seed : cfg.seeds) {
            CellSpec spec;
            spec.solver = "gdice";
            spec.seed = seed;
            spec.gdice = cfg.gdice;
            spec.gdice.discretization = d;
            spec.epscko = cfg.epscko;
            spec.final_eval_trajectories = cfg.final_eval_trajectories;
            spec.scheme_label = detail::scheme_label_for(spec.gdice);
            spec.d_label = std::to_string(d);
            spec.policy_filename = "gdice-d" + std::to_string(d) + "-seed" +
                                   std::to_string(seed) + ".json";
            specs.push_back(std::move(spec));
        }
    }
    for (std::uint64_t seed : cfg.seeds) {
        CellSpec spec;
        spec.solver = "epscko";
        spec.seed = seed;
        spec.gdice = cfg.gdice;
        spec.epscko = cfg.epscko;
        spec.final_eval_trajectories = cfg.final_eval_trajectories;
        spec.scheme_label =
            cfg.epscko.alpha_ei > 0.0 ? "max-entropy-injection" : "none";
        spec.d_label = "continuous";
        spec.policy_filename =
            "epscko-seed" + std::to_string(seed) + ".json";
        specs.push_back(std::move(spec));
    }
    const std::vector<CellResult> results =
        detail::run_cells(cfg.domain, specs, jobs);
    detail::write_outputs(out_dir, specs, results);
}

/// Verifies that a serialized policy can control the given domain.
inline void check_compatibility(const AnyDomain& domain,
                                const AnyPolicy& policy) {
    std::visit(
        [&](const auto& dom, const auto& pol) {
            if (pol.num_robots() != dom.num_robots())
                throw SchemaError(
                    "policy/domain mismatch: robot counts differ");
            for (int i = 0; i < dom.num_robots(); ++i)
                if (pol.num_actions(i) != dom.num_actions(i))
                    throw SchemaError(
                        "policy/domain mismatch: macro-action sets differ");
            if constexpr (std::is_same_v<std::decay_t<decltype(pol)>,
                                         FsaPolicy>) {
                if (pol.grid().dim() != dom.obs_dim())
                    throw SchemaError(
                        "policy/domain mismatch: observation dimensions "
                        "differ");
            } else {
                for (int i = 0; i < pol.num_robots(); ++i)
                    for (const auto& fn : pol.robot(i).transition)
                        for (const auto& b : fn.basis())
                            if (static_cast<int>(b.size()) != dom.obs_dim())
                                throw SchemaError(
                                    "policy/domain mismatch: observation "
                                    "dimensions differ");
            }
        },
        domain, policy);
}

struct EvaluateOutcome {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo evaluation of a serialized policy; also writes
/// evaluation.csv under out_dir. Shares its stream tag with the final
/// evaluation performed by the solve commands, so evaluating a just-written
/// policy with the same seed and trajectory count reproduces the reported
/// value exactly.
inline EvaluateOutcome run_evaluate(const std::string& policy_path,
                                    const std::string& domain_path,
                                    int n_traj, std::uint64_t seed,
                                    long horizon,
                                    const std::filesystem::path& out_dir) {
    const AnyDomain domain = load_domain_config(domain_path);
    const AnyPolicy policy = load_policy_file(policy_path);
    check_compatibility(domain, policy);
    const ValueEstimate est = std::visit(
        [&](const auto& dom, const auto& pol) {
            return evaluate(dom, pol, n_traj, horizon,
                            derive_stream(seed, streams::kFinalEvaluate));
        },
        domain, policy);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path csv = out_dir / "evaluation.csv";
    std::ofstream out(csv);
    if (!out)
        throw std::runtime_error("cannot write file: " + csv.string());
    out << "policy,domain,trajectories,seed,horizon,mean,std_error\n";
    out << policy_path << ',' << domain_path << ',' << n_traj << ',' << seed
        << ',' << horizon << ',' << format_g17(est.mean) << ','
        << format_g17(est.std_error) << '\n';
    return {est.mean, est.std_error};
}

}  // namespace decpos

#endif
