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

// JSON formats: cost specifications, run configurations and populations.
//
// Cost specification:
//   {"kind": "linear", "alpha": 4.0}
//   {"kind": "scaled", "kappa": 2.0, "base": {...}}
//   {"kind": "shift_invariant", "c0": <map>}
//   {"kind": "separable", "c1": <map>, "c2": <map>}
// where <map> is one of
//   {"type": "power", "exponent": 2.0, "scale": 1.0}
//   {"type": "polynomial", "coefficients": [c0, c1, ...]}
//   {"type": "table", "knots": [...], "values": [...]}
// and may carry "analytic_derivative": false to force finite differences.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stratburden/costs.hpp"
#include "stratburden/distributions.hpp"
#include "stratburden/error.hpp"
#include "stratburden/io/ingest.hpp"
#include "stratburden/population.hpp"

namespace stratburden::io {

using json = nlohmann::json;

namespace detail {

template <typename T>
T get_field(const json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(context + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(context + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_field<T>(j, key, context);
}

}  // namespace detail

inline ScalarMap scalar_map_from_json(const json& j) {
  const std::string ctx = "scalar map";
  const auto type = detail::get_field<std::string>(j, "type", ctx);
  const bool analytic = detail::get_or<bool>(j, "analytic_derivative", true, ctx);
  if (type == "power") {
    return ScalarMap(
        scalar::Power{detail::get_field<double>(j, "exponent", ctx),
                      detail::get_or<double>(j, "scale", 1.0, ctx)},
        analytic);
  }
  if (type == "polynomial") {
    return ScalarMap(
        scalar::Polynomial{
            detail::get_field<std::vector<double>>(j, "coefficients", ctx)},
        analytic);
  }
  if (type == "table") {
    return ScalarMap(
        scalar::Table{detail::get_field<std::vector<double>>(j, "knots", ctx),
                      detail::get_field<std::vector<double>>(j, "values", ctx)},
        analytic);
  }
  throw ValidationError("unknown scalar map type '" + type + "'");
}

inline json scalar_map_to_json(const ScalarMap& map) {
  json j = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, scalar::Power>) {
          return {{"type", "power"}, {"exponent", f.exponent}, {"scale", f.scale}};
        } else if constexpr (std::is_same_v<T, scalar::Polynomial>) {
          return {{"type", "polynomial"}, {"coefficients", f.coefficients}};
        } else {
          return {{"type", "table"}, {"knots", f.knots}, {"values", f.values}};
        }
      },
      map.form());
  if (!map.has_analytic_derivative()) j["analytic_derivative"] = false;
  return j;
}

inline CostModel cost_from_json(const json& j) {
  const std::string ctx = "cost";
  const auto kind = detail::get_field<std::string>(j, "kind", ctx);
  if (kind == "linear") {
    return CostModel::linear(detail::get_field<double>(j, "alpha", ctx));
  }
  if (kind == "scaled") {
    if (!j.contains("base")) throw ValidationError("cost: missing field 'base'");
    return CostModel::scaled(detail::get_field<double>(j, "kappa", ctx),
                             cost_from_json(j.at("base")));
  }
  if (kind == "shift_invariant") {
    if (!j.contains("c0")) throw ValidationError("cost: missing field 'c0'");
    return CostModel::shift_invariant(scalar_map_from_json(j.at("c0")));
  }
  if (kind == "separable") {
    if (!j.contains("c1") || !j.contains("c2")) {
      throw ValidationError("cost: separable needs 'c1' and 'c2'");
    }
    return CostModel::separable(scalar_map_from_json(j.at("c1")),
                                scalar_map_from_json(j.at("c2")));
  }
  throw ValidationError("unknown cost kind '" + kind + "'");
}

inline json cost_to_json(const CostModel& cost) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, cost::Linear>) {
          return {{"kind", "linear"}, {"alpha", k.alpha}};
        } else if constexpr (std::is_same_v<T, cost::Separable>) {
          return {{"kind", "separable"},
                  {"c1", scalar_map_to_json(k.c1)},
                  {"c2", scalar_map_to_json(k.c2)}};
        } else if constexpr (std::is_same_v<T, cost::ShiftInvariant>) {
          return {{"kind", "shift_invariant"}, {"c0", scalar_map_to_json(k.c0)}};
        } else {
          return {{"kind", "scaled"},
                  {"kappa", k.kappa},
                  {"base", cost_to_json(*k.base)}};
        }
      },
      cost.kind());
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
}

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  std::size_t n = 201;
};

struct OracleSpec {
  bool enabled = false;
  std::size_t n_agents = 100000;
  double epsilon = 0.0;
  std::size_t grid_n = 11;
  std::size_t max_flags = 1;
};

// Per-value gap sweeps. "kappa": group b pays kappa times group a's cost.
// "alpha": every group uses the linear cost with this alpha.
struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

struct OutputSpec {
  std::filesystem::path dir = ".";
  std::string tradeoff = "tradeoff.csv";
  std::string gap = "gap.csv";
  std::string equilibria = "equilibria.json";
  std::string oracle = "oracle.json";
};

struct RunConfig {
  json population;
  std::filesystem::path base_dir;  // relative paths resolve against this
  json cost;
  std::map<std::string, json> group_costs;
  std::optional<std::pair<std::string, std::string>> gap_groups;
  GridSpec tau_grid;
  std::size_t nash_grid_n = 201;
  std::optional<double> score_threshold;
  OutputSpec outputs;
  std::uint64_t seed = 0;
  OracleSpec oracle;
  std::optional<SweepSpec> sweep;
  std::size_t threads = 0;
};

inline RunConfig run_config_from_json(const json& j,
                                      const std::filesystem::path& base_dir) {
  const std::string ctx = "config";
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig cfg;
  cfg.base_dir = base_dir;
  if (!j.contains("population")) throw ValidationError("config: missing 'population'");
  cfg.population = j.at("population");
  if (!j.contains("cost")) throw ValidationError("config: missing 'cost'");
  cfg.cost = j.at("cost");
  if (j.contains("group_costs")) {
    for (const auto& [label, spec] : j.at("group_costs").items()) {
      cfg.group_costs.emplace(label, spec);
    }
  }
  if (j.contains("gap_groups")) {
    const auto labels = detail::get_field<std::vector<std::string>>(j, "gap_groups", ctx);
    if (labels.size() != 2) throw ValidationError("config: gap_groups needs two labels");
    cfg.gap_groups = std::make_pair(labels[0], labels[1]);
  }
  if (j.contains("tau_grid")) {
    const json& g = j.at("tau_grid");
    cfg.tau_grid.min = detail::get_or<double>(g, "min", 0.0, "tau_grid");
    cfg.tau_grid.max = detail::get_or<double>(g, "max", 1.0, "tau_grid");
    cfg.tau_grid.n = detail::get_or<std::size_t>(g, "n", 201, "tau_grid");
  }
  cfg.nash_grid_n = detail::get_or<std::size_t>(j, "nash_grid_n", 201, ctx);
  if (j.contains("score_threshold")) {
    cfg.score_threshold = detail::get_field<double>(j, "score_threshold", ctx);
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    cfg.outputs.dir = detail::get_or<std::string>(o, "dir", ".", "outputs");
    cfg.outputs.tradeoff = detail::get_or<std::string>(o, "tradeoff", cfg.outputs.tradeoff, "outputs");
    cfg.outputs.gap = detail::get_or<std::string>(o, "gap", cfg.outputs.gap, "outputs");
    cfg.outputs.equilibria = detail::get_or<std::string>(o, "equilibria", cfg.outputs.equilibria, "outputs");
    cfg.outputs.oracle = detail::get_or<std::string>(o, "oracle", cfg.outputs.oracle, "outputs");
  }
  if (cfg.outputs.dir.is_relative()) cfg.outputs.dir = base_dir / cfg.outputs.dir;
  {
    const std::vector<std::string> names = {cfg.outputs.tradeoff, cfg.outputs.gap,
                                            cfg.outputs.equilibria, cfg.outputs.oracle};
    for (std::size_t a = 0; a < names.size(); ++a) {
      for (std::size_t b = a + 1; b < names.size(); ++b) {
        if (names[a] == names[b]) {
          throw ValidationError("config: output paths must be distinct ('" +
                                names[a] + "')");
        }
      }
    }
  }
  cfg.seed = detail::get_or<std::uint64_t>(j, "seed", 0, ctx);
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    cfg.oracle.enabled = detail::get_or<bool>(o, "enabled", true, "oracle");
    cfg.oracle.n_agents = detail::get_or<std::size_t>(o, "n_agents", 100000, "oracle");
    cfg.oracle.epsilon = detail::get_or<double>(o, "epsilon", 0.0, "oracle");
    cfg.oracle.grid_n = detail::get_or<std::size_t>(o, "grid_n", 11, "oracle");
    cfg.oracle.max_flags = detail::get_or<std::size_t>(o, "max_flags", 1, "oracle");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    SweepSpec spec;
    spec.parameter = detail::get_field<std::string>(s, "parameter", "sweep");
    spec.values = detail::get_field<std::vector<double>>(s, "values", "sweep");
    if (spec.parameter != "alpha" && spec.parameter != "kappa") {
      throw ValidationError("sweep: parameter must be 'alpha' or 'kappa'");
    }
    if (spec.values.empty()) throw ValidationError("sweep: values are empty");
    cfg.sweep = std::move(spec);
  }
  cfg.threads = detail::get_or<std::size_t>(j, "threads", 0, ctx);
  return cfg;
}

inline RunConfig read_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json_file(path), path.parent_path());
}

// Resolved population: labelled distributions, plus the score dataset when the
// source was score data.
struct LoadedPopulation {
  std::vector<LabelledDistribution> dists;
  std::optional<ScoreDataset> scores;
};

namespace detail {

inline ParametricFamily family_from_json(const json& j) {
  const std::string ctx = "parametric population";
  const auto fam = get_field<std::string>(j, "family", ctx);
  if (fam == "uniform") return family::Uniform{};
  if (fam == "beta") {
    return family::Beta{get_field<double>(j, "a", ctx), get_field<double>(j, "b", ctx)};
  }
  if (fam == "two_point") {
    return family::TwoPoint{get_field<double>(j, "l1", ctx),
                            get_field<double>(j, "l2", ctx),
                            get_field<double>(j, "p", ctx)};
  }
  throw ValidationError("unknown parametric family '" + fam + "'");
}

inline LikelihoodDistribution single_from_json(const json& j) {
  const auto type = get_field<std::string>(j, "type", "population");
  if (type == "parametric") {
    return discretize_parametric(family_from_json(j),
                                 get_or<std::size_t>(j, "n", 1000, "population"));
  }
  if (type == "inline") {
    return LikelihoodDistribution(
        get_field<std::vector<double>>(j, "support", "population"),
        get_field<std::vector<double>>(j, "mass", "population"));
  }
  throw ValidationError("population type '" + type +
                        "' cannot be nested inside a group");
}

inline std::filesystem::path resolve(const std::filesystem::path& base,
                                     const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_relative() ? base / path : path;
}

}  // namespace detail

inline LoadedPopulation load_population(const json& j,
                                        const std::filesystem::path& base_dir) {
  LoadedPopulation out;
  const auto type = detail::get_field<std::string>(j, "type", "population");
  if (type == "parametric" || type == "inline") {
    out.dists.push_back({detail::get_or<std::string>(j, "label", "a", "population"),
                         detail::single_from_json(j)});
  } else if (type == "groups") {
    if (!j.contains("groups") || !j.at("groups").is_array()) {
      throw ValidationError("population: 'groups' must be an array");
    }
    for (const auto& g : j.at("groups")) {
      const auto label = detail::get_field<std::string>(g, "label", "group");
      if (!g.contains("population")) {
        throw ValidationError("group '" + label + "': missing 'population'");
      }
      out.dists.push_back({label, detail::single_from_json(g.at("population"))});
    }
  } else if (type == "distribution_file") {
    out.dists = read_distribution_file(detail::resolve(
        base_dir, detail::get_field<std::string>(j, "path", "population")));
    for (std::size_t i = 0; i < out.dists.size(); ++i) {
      if (out.dists[i].label.empty()) out.dists[i].label = "a";
    }
  } else if (type == "scores") {
    IngestResult ingested = ingest_scores(
        detail::resolve(base_dir, detail::get_field<std::string>(j, "cdf", "population")),
        detail::resolve(base_dir,
                        detail::get_field<std::string>(j, "performance", "population")));
    for (auto& g : ingested.groups) out.dists.push_back({g.label, g.dist});
    out.scores = std::move(ingested.data);
  } else {
    throw ValidationError("unknown population type '" + type + "'");
  }
  if (j.contains("select")) {
    const auto wanted = detail::get_field<std::vector<std::string>>(j, "select", "population");
    std::vector<LabelledDistribution> picked;
    for (const auto& label : wanted) {
      auto it = std::find_if(out.dists.begin(), out.dists.end(),
                             [&](const auto& d) { return d.label == label; });
      if (it == out.dists.end()) throw ValidationError("missing group '" + label + "'");
      picked.push_back(*it);
    }
    out.dists = std::move(picked);
  }
  return out;
}

// Pairs each loaded distribution with its cost: group_costs[label] when
// present, else the shared cost.
inline GroupedPopulation build_population(const RunConfig& cfg,
                                          const LoadedPopulation& loaded) {
  const CostModel shared = cost_from_json(cfg.cost);
  for (const auto& [label, spec] : cfg.group_costs) {
    const bool known = std::any_of(loaded.dists.begin(), loaded.dists.end(),
                                   [&](const auto& d) { return d.label == label; });
    if (!known) throw ValidationError("group_costs names missing group '" + label + "'");
  }
  std::vector<Group> groups;
  for (const auto& d : loaded.dists) {
    auto it = cfg.group_costs.find(d.label);
    CostModel model = it == cfg.group_costs.end() ? shared : cost_from_json(it->second);
    groups.push_back({d.label, d.dist, ValidatedCost(std::move(model))});
  }
  return GroupedPopulation(std::move(groups));
}

}  // namespace stratburden::io
