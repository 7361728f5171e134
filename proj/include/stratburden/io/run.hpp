// Copyright 2026 The stratburden Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sweep orchestration: resolves a RunConfig, evaluates every curve and report
// and writes
//   tradeoff.csv             first group (tradeoff_<label>.csv for the rest)
//   gap.csv                  when the population has two or more groups
//   gap_<param>_<value>.csv  one per sweep value
//   equilibria.json
//   oracle.json              when the oracle is enabled

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stratburden/equilibria.hpp"
#include "stratburden/error.hpp"
#include "stratburden/io/config.hpp"
#include "stratburden/io/report.hpp"
#include "stratburden/metrics.hpp"
#include "stratburden/oracle.hpp"

namespace stratburden::io {

struct LoadedRun {
  RunConfig config;
  LoadedPopulation loaded;
  GroupedPopulation population;
};

inline LoadedRun load_run(RunConfig cfg) {
  LoadedPopulation loaded = load_population(cfg.population, cfg.base_dir);
  GroupedPopulation pop = build_population(cfg, loaded);
  return {std::move(cfg), std::move(loaded), std::move(pop)};
}

inline std::vector<double> sweep_grid(const RunConfig& cfg) {
  return uniform_grid(cfg.tau_grid.min, cfg.tau_grid.max, cfg.tau_grid.n);
}

// The (a, b) labels used for gap curves, or nothing for one-group runs.
inline std::optional<std::pair<std::string, std::string>> gap_labels(
    const LoadedRun& run) {
  if (run.config.gap_groups) {
    (void)run.population.at(run.config.gap_groups->first);
    (void)run.population.at(run.config.gap_groups->second);
    return run.config.gap_groups;
  }
  const auto& groups = run.population.groups();
  if (groups.size() < 2) return std::nullopt;
  return std::make_pair(groups[0].label, groups[1].label);
}

// Populations for each sweep value, labelled for file naming.
inline std::vector<std::pair<std::string, GroupedPopulation>> sweep_populations(
    const LoadedRun& run, const std::string& a, const std::string& b) {
  std::vector<std::pair<std::string, GroupedPopulation>> out;
  if (!run.config.sweep) return out;
  const SweepSpec& spec = *run.config.sweep;
  const Group& ga = run.population.at(a);
  const Group& gb = run.population.at(b);
  for (double v : spec.values) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%g", spec.parameter.c_str(), v);
    if (spec.parameter == "kappa") {
      out.emplace_back(name, GroupedPopulation({
                                 {a, ga.dist, ga.cost},
                                 {b, gb.dist, scale_cost(v, ga.cost)},
                             }));
    } else {
      const ValidatedCost linear(CostModel::linear(v));
      out.emplace_back(name, GroupedPopulation({
                                 {a, ga.dist, linear},
                                 {b, gb.dist, linear},
                             }));
    }
  }
  return out;
}

inline json equilibria_json(const LoadedRun& run) {
  const std::vector<double> grid = sweep_grid(run.config);
  json reports = json::array();
  for (const auto& g : run.population.groups()) {
    json r = to_json(solve_equilibria(g.dist, g.cost, grid, run.config.nash_grid_n));
    r["group"] = g.label;
    reports.push_back(std::move(r));
  }
  json out = {{"tau0", kTau0}, {"reports", reports}};
  if (run.config.score_threshold) {
    if (!run.loaded.scores) {
      throw ValidationError("score_threshold needs a score-data population");
    }
    const double score = *run.config.score_threshold;
    const double tau = run.loaded.scores->likelihood_at(score);
    json points = json::object();
    for (const auto& g : run.population.groups()) {
      const TradeoffPoint p = tradeoff_point(tau, g.dist, g.cost);
      points[g.label] = tradeoff_to_json(std::span<const TradeoffPoint>(&p, 1))[0];
    }
    out["score_threshold"] = {{"score", score}, {"likelihood", tau}, {"points", points}};
  }
  return out;
}

inline json oracle_json(const LoadedRun& run) {
  const RunConfig& cfg = run.config;
  SimulationConfig sim;
  sim.n_agents = cfg.oracle.n_agents;
  sim.seed = cfg.seed;
  sim.epsilon_noise = cfg.oracle.epsilon;
  sim.threads = cfg.threads;
  const std::vector<double> grid =
      uniform_grid(cfg.tau_grid.min, cfg.tau_grid.max, cfg.oracle.grid_n);
  json groups = json::array();
  bool passed = true;
  for (const auto& g : run.population.groups()) {
    const AgreementReport report =
        oracle_agreement(g.dist, g.cost, grid, sim, cfg.oracle.max_flags);
    passed = passed && report.passed();
    json r = to_json(report);
    r["group"] = g.label;
    groups.push_back(std::move(r));
  }
  return {{"passed", passed},
          {"seed", cfg.seed},
          {"n_agents", cfg.oracle.n_agents},
          {"epsilon", cfg.oracle.epsilon},
          {"groups", groups}};
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw RuntimeError("write failed for " + path.string());
}

struct RunSummary {
  std::vector<std::filesystem::path> written;
};

struct RunParts {
  bool tradeoff = true;
  bool gap = true;
  bool equilibria = true;
  bool oracle = true;  // still requires config.oracle.enabled
};

inline RunSummary run_sweep(const LoadedRun& run, RunParts parts = {}) {
  const RunConfig& cfg = run.config;
  std::error_code ec;
  std::filesystem::create_directories(cfg.outputs.dir, ec);
  if (ec) throw RuntimeError("cannot create " + cfg.outputs.dir.string());

  RunSummary summary;
  auto emit = [&](const std::string& name,
                  const std::function<void(std::ostream&)>& body) {
    const auto path = cfg.outputs.dir / name;
    write_text_file(path, body);
    summary.written.push_back(path);
  };

  const std::vector<double> grid = sweep_grid(cfg);
  if (parts.tradeoff) {
    const auto& groups = run.population.groups();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto points = sweep(groups[i].dist, groups[i].cost, grid, cfg.threads);
      const std::string name =
          i == 0 ? cfg.outputs.tradeoff : "tradeoff_" + groups[i].label + ".csv";
      emit(name, [&](std::ostream& out) { write_tradeoff_csv(out, points); });
    }
  }
  if (parts.gap) {
    if (const auto labels = gap_labels(run)) {
      const auto& [a, b] = *labels;
      const GapCurve curve = gap_sweep(run.population, a, b, grid, cfg.threads);
      emit(cfg.outputs.gap, [&](std::ostream& out) { write_gap_csv(out, curve); });
      for (const auto& [name, pop] : sweep_populations(run, a, b)) {
        const GapCurve c = gap_sweep(pop, a, b, grid, cfg.threads);
        emit("gap_" + name + ".csv", [&](std::ostream& out) { write_gap_csv(out, c); });
      }
    } else if (cfg.sweep) {
      throw ValidationError("gap sweeps need a population with two groups");
    }
  }
  if (parts.equilibria) {
    const json eq = equilibria_json(run);
    emit(cfg.outputs.equilibria, [&](std::ostream& out) { out << eq.dump(2) << '\n'; });
  }
  if (parts.oracle && cfg.oracle.enabled) {
    const json oracle = oracle_json(run);
    emit(cfg.outputs.oracle, [&](std::ostream& out) { out << oracle.dump(2) << '\n'; });
  }
  return summary;
}

inline RunSummary run_sweep(const RunConfig& cfg, RunParts parts = {}) {
  return run_sweep(load_run(cfg), parts);
}

}  // namespace stratburden::io
