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

// Command-line front end. Exit codes: 0 success, 1 usage, 2 data validation,
// 3 runtime.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stratburden/costs.hpp"
#include "stratburden/equilibria.hpp"
#include "stratburden/error.hpp"
#include "stratburden/io/config.hpp"
#include "stratburden/io/ingest.hpp"
#include "stratburden/io/report.hpp"
#include "stratburden/io/run.hpp"

namespace {

namespace sb = stratburden;
namespace io = stratburden::io;
using json = nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<std::size_t> grid_n;
  std::optional<std::uint64_t> seed;
  std::optional<double> score_threshold;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
  bool quiet = false;
  std::string format;  // empty: per-command default

  bool json_out(bool fallback) const { return format.empty() ? fallback : format == "json"; }
};

void check_grid(const io::GridSpec& g, const char* what) {
  if (g.n < 2) throw UsageError(std::string(what) + ": grid needs n >= 2");
  if (!(g.min < g.max)) throw UsageError(std::string(what) + ": grid needs min < max");
}

io::RunConfig load_config(const std::string& path, const GlobalOptions& opt) {
  io::RunConfig cfg = io::read_run_config(path);
  check_grid(cfg.tau_grid, "config tau_grid");
  if (opt.grid_n) {
    cfg.tau_grid.n = *opt.grid_n;
    check_grid(cfg.tau_grid, "--grid-n");
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.score_threshold) cfg.score_threshold = *opt.score_threshold;
  if (opt.out_dir) cfg.outputs.dir = *opt.out_dir;
  if (opt.threads) cfg.threads = *opt.threads;
  return cfg;
}

void print_written(const io::RunSummary& summary, const GlobalOptions& opt) {
  if (opt.quiet) return;
  if (opt.json_out(true)) {
    json files = json::array();
    for (const auto& p : summary.written) files.push_back(p.string());
    std::cout << json{{"written", files}}.dump(2) << '\n';
  } else {
    std::cout << "written\n";
    for (const auto& p : summary.written) std::cout << p.string() << '\n';
  }
}

int cmd_validate_cost(const std::string& path, const GlobalOptions& opt) {
  const sb::CostModel model = io::cost_from_json(io::read_json_file(path));
  const auto grid = sb::default_validation_grid();
  const sb::CostValidationReport report = sb::validate_outcome_monotonic(model, grid);
  const sb::LikelihoodConditionResult cond = sb::likelihood_condition(model, grid, grid);
  if (!opt.quiet) {
    if (opt.json_out(false)) {
      std::cout << json{{"outcome_monotonic", io::to_json(report)},
                        {"likelihood_condition", io::to_json(cond)}}
                       .dump(2)
                << '\n';
    } else {
      std::cout << "outcome-monotonic: " << (report.passed ? "PASS" : "FAIL")
                << "; likelihood-condition: " << (cond.holds ? "PASS" : "FAIL") << '\n';
      if (!report.passed) std::cout << sb::describe(report.violations.front()) << '\n';
    }
  }
  return report.passed ? 0 : kExitValidation;
}

int cmd_equilibria(const std::string& path, const GlobalOptions& opt) {
  const io::LoadedRun run = io::load_run(load_config(path, opt));
  const json eq = io::equilibria_json(run);
  if (opt.quiet) return 0;
  if (opt.json_out(true)) {
    std::cout << eq.dump(2) << '\n';
  } else {
    std::cout << "group,tau0,tau_star,tau_argmax,tau_nash_floor\n";
    for (const auto& r : eq.at("reports")) {
      const json& floor = r.at("tau_nash_floor");
      std::cout << r.at("group").get<std::string>() << ','
                << io::format_double(r.at("tau0").get<double>()) << ','
                << io::format_double(r.at("tau_star").get<double>()) << ','
                << io::format_double(r.at("tau_argmax").get<double>()) << ','
                << (floor.is_null() ? std::string() : io::format_double(floor.get<double>()))
                << '\n';
    }
  }
  return 0;
}

int cmd_sweep(const std::string& path, const GlobalOptions& opt, io::RunParts parts) {
  const io::LoadedRun run = io::load_run(load_config(path, opt));
  print_written(io::run_sweep(run, parts), opt);
  return 0;
}

int cmd_simulate(const std::string& path, const GlobalOptions& opt) {
  io::RunConfig cfg = load_config(path, opt);
  cfg.oracle.enabled = true;
  const io::LoadedRun run = io::load_run(std::move(cfg));
  io::RunParts parts;
  parts.tradeoff = parts.gap = parts.equilibria = false;
  const io::RunSummary summary = io::run_sweep(run, parts);
  if (!opt.quiet) {
    const json report = io::read_json_file(summary.written.front());
    if (opt.json_out(true)) {
      std::cout << report.dump(2) << '\n';
    } else {
      std::cout << "group,tau,utility_analytic,utility_hat,utility_se,"
                   "burden_analytic,burden_hat,burden_se,flagged\n";
      for (const auto& g : report.at("groups")) {
        for (const auto& e : g.at("entries")) {
          const json& est = e.at("estimate");
          const json& bh = est.at("burden_hat");
          std::cout << g.at("group").get<std::string>() << ','
                    << io::format_double(e.at("tau").get<double>()) << ','
                    << io::format_double(e.at("utility_analytic").get<double>()) << ','
                    << io::format_double(est.at("utility_hat").get<double>()) << ','
                    << io::format_double(est.at("utility_se").get<double>()) << ','
                    << io::format_double(e.at("burden_analytic").get<double>()) << ','
                    << (bh.is_null() ? std::string() : io::format_double(bh.get<double>()))
                    << ',' << io::format_double(est.at("burden_se").get<double>()) << ','
                    << (e.at("utility_flagged").get<bool>() ||
                                e.at("burden_flagged").get<bool>()
                            ? 1
                            : 0)
                    << '\n';
        }
      }
    }
  }
  return 0;
}

int cmd_reduce(const std::string& path, const GlobalOptions& opt) {
  const json j = io::read_json_file(path);
  if (!j.is_object() || !j.contains("points") || !j.contains("cost") ||
      !j.contains("accepted")) {
    throw sb::ValidationError("universe needs 'points', 'cost' and 'accepted'");
  }
  std::vector<sb::FeaturePoint> points;
  for (const auto& p : j.at("points")) {
    points.push_back({p.at("likelihood").get<double>(), p.at("mass").get<double>()});
  }
  sb::ValidatedCost cost(io::cost_from_json(j.at("cost")));
  const auto accepted = j.at("accepted").get<std::vector<std::size_t>>();
  const sb::FeatureUniverse universe =
      j.contains("matrix")
          ? sb::FeatureUniverse(std::move(points), std::move(cost),
                                j.at("matrix").get<std::vector<double>>())
          : sb::FeatureUniverse(std::move(points), std::move(cost));
  const sb::ReductionReport report = sb::reduce_classifier(universe, accepted);
  if (!opt.quiet) {
    if (opt.json_out(true)) {
      std::cout << io::to_json(report).dump(2) << '\n';
    } else {
      std::cout << "tau_f,utility_classifier,utility_threshold,burden_classifier,"
                   "burden_threshold\n"
                << io::format_double(report.tau_f) << ','
                << io::format_double(report.utility_classifier) << ','
                << io::format_double(report.utility_threshold) << ','
                << io::format_double(report.burden_classifier) << ','
                << io::format_double(report.burden_threshold) << '\n';
    }
  }
  return 0;
}

int cmd_ingest(const std::string& cdf, const std::string& perf, const std::string& out,
               const GlobalOptions& opt) {
  const io::IngestResult result = io::ingest_scores(cdf, perf);
  if (result.clipped_total > 0 && !opt.quiet) {
    std::cerr << "warning: " << result.clipped_total
              << " likelihoods raised to the floor " << io::kLikelihoodFloor << '\n';
  }
  std::vector<io::LabelledDistribution> dists;
  for (const auto& g : result.groups) dists.push_back({g.label, g.dist});
  io::write_distribution_file(out, dists);

  json summary = {{"out", out}, {"clipped", result.clipped_total}, {"groups", json::array()}};
  for (const auto& g : result.groups) {
    summary["groups"].push_back({{"label", g.label},
                                 {"points", g.dist.size()},
                                 {"positive_rate", g.dist.positive_rate()}});
  }
  if (opt.score_threshold) {
    summary["score_threshold"] = {
        {"score", *opt.score_threshold},
        {"likelihood", result.data.likelihood_at(*opt.score_threshold)}};
  }
  if (!opt.quiet) {
    if (opt.json_out(true)) {
      std::cout << summary.dump(2) << '\n';
    } else {
      std::cout << "group,points,positive_rate\n";
      for (const auto& g : result.groups) {
        std::cout << g.label << ',' << g.dist.size() << ','
                  << io::format_double(g.dist.positive_rate()) << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategic classification in outcome-likelihood space: equilibria, "
               "accuracy/burden trade-offs and group burden gaps."};
  app.require_subcommand(1);

  GlobalOptions opt;
  std::size_t grid_n = 0;
  std::uint64_t seed = 0;
  double score_threshold = 0.0;
  std::string out_dir;
  std::size_t threads = 0;
  auto* grid_opt = app.add_option("--grid-n", grid_n, "Number of tau grid points (>= 2)");
  auto* seed_opt = app.add_option("--seed", seed, "Oracle seed");
  auto* score_opt = app.add_option("--score-threshold", score_threshold,
                                   "Score-space threshold, mapped to likelihood");
  auto* dir_opt = app.add_option("--out-dir", out_dir, "Output directory override");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = auto)");
  app.add_flag("--quiet", opt.quiet, "Suppress stdout reports");
  app.add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string path;
  std::string cdf_path;
  std::string perf_path;
  std::string out_path;
  auto* validate = app.add_subcommand("validate-cost", "Validate a cost JSON file");
  validate->add_option("cost", path, "Cost JSON")->required();
  auto* equilibria = app.add_subcommand("equilibria", "Solve threshold equilibria");
  equilibria->add_option("config", path, "Run config JSON")->required();
  auto* sweep = app.add_subcommand("sweep", "Write all curves and reports");
  sweep->add_option("config", path, "Run config JSON")->required();
  auto* gap = app.add_subcommand("gap-sweep", "Write burden-gap curves");
  gap->add_option("config", path, "Run config JSON")->required();
  auto* simulate = app.add_subcommand("simulate", "Cross-check with the agent simulator");
  simulate->add_option("config", path, "Run config JSON")->required();
  auto* reduce = app.add_subcommand("reduce", "Reduce a classifier to its threshold");
  reduce->add_option("universe", path, "Feature universe JSON")->required();
  auto* ingest = app.add_subcommand("ingest", "Convert score data to likelihood space");
  ingest->add_option("cdf", cdf_path, "Group score CDF CSV")->required();
  ingest->add_option("perf", perf_path, "Score performance CSV")->required();
  ingest->add_option("--out", out_path, "Output distribution CSV")->required();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (*grid_opt) opt.grid_n = grid_n;
  if (*seed_opt) opt.seed = seed;
  if (*score_opt) opt.score_threshold = score_threshold;
  if (*dir_opt) opt.out_dir = out_dir;
  if (*threads_opt) opt.threads = threads;

  try {
    if (opt.grid_n && *opt.grid_n < 2) throw UsageError("--grid-n must be >= 2");
    if (*validate) return cmd_validate_cost(path, opt);
    if (*equilibria) return cmd_equilibria(path, opt);
    if (*sweep) return cmd_sweep(path, opt, {});
    if (*gap) return cmd_sweep(path, opt, {false, true, false, false});
    if (*simulate) return cmd_simulate(path, opt);
    if (*reduce) return cmd_reduce(path, opt);
    if (*ingest) return cmd_ingest(cdf_path, perf_path, out_path, opt);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
