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

// Monte Carlo agent simulation.
//
// Each agent draws a likelihood from the population, a label from
// Bernoulli(l), and best-responds to the published threshold. Estimates are
// plain sample means over agents, so they re-derive the analytic metrics
// without sharing any of their summation code.
//
// Random streams are keyed by (seed, stream, agent index) through SplitMix64,
// and agents are reduced in fixed-size blocks merged in block order, so
// results are bit-identical for any number of worker threads.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratburden/costs.hpp"
#include "stratburden/detail/parallel.hpp"
#include "stratburden/distributions.hpp"
#include "stratburden/error.hpp"
#include "stratburden/metrics.hpp"
#include "stratburden/population.hpp"
#include "stratburden/response.hpp"

namespace stratburden {

struct SimulationConfig {
  std::size_t n_agents = 100000;
  std::uint64_t seed = 0;
  // Probability that an agent below the threshold flips its game/stay choice.
  double epsilon_noise = 0.0;
  std::size_t threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (n_agents < 1) throw ValidationError("simulation needs n_agents >= 1");
    if (!(epsilon_noise >= 0.0 && epsilon_noise < 1.0)) {
      throw ValidationError("epsilon_noise must lie in [0, 1)");
    }
  }
};

struct SimulationResult {
  double utility_hat = 0.0;
  double utility_se = 0.0;
  std::optional<double> burden_hat;  // absent when no positives were drawn
  double burden_se = 0.0;
  std::optional<double> social_utility_hat;
  double social_utility_se = 0.0;
  std::size_t n_agents = 0;
  std::size_t n_positives = 0;
  std::string note;

  bool operator==(const SimulationResult&) const = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream for one agent.
class AgentStream {
 public:
  AgentStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t agent) {
    std::uint64_t s = seed;
    state_ = splitmix64(s) ^ (stream * 0xD1B54A32D192ED03ULL);
    std::uint64_t t = state_ + agent;
    state_ = splitmix64(t);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

struct BlockStats {
  std::size_t agents = 0;
  std::size_t correct = 0;
  std::size_t positives = 0;
  double burden_sum = 0.0;
  double burden_sq = 0.0;
  double su_sum = 0.0;
  double su_sq = 0.0;
};

inline constexpr std::size_t kAgentBlock = 4096;

inline double sample_se(double sum, double sq, std::size_t n) {
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sq - dn * mean * mean) / (dn - 1.0));
  return std::sqrt(var / dn);
}

}  // namespace detail

// Simulates config.n_agents agents drawn from dist. `stream` separates the
// random streams of different groups sharing a seed.
inline SimulationResult simulate(const LikelihoodDistribution& dist,
                                 const CostModel& cost, double tau,
                                 const SimulationConfig& config,
                                 std::uint64_t stream = 0) {
  config.validate();
  const ThresholdPolicy policy(tau);

  std::vector<double> cumulative(dist.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.mass()[i];
    cumulative[i] = acc;
  }
  const auto support = dist.support();
  auto draw_likelihood = [&](double u) {
    const double target = u * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), dist.size() - 1);
    return support[idx];
  };

  const std::size_t n = config.n_agents;
  const std::size_t blocks = (n + detail::kAgentBlock - 1) / detail::kAgentBlock;
  const auto stats = detail::parallel_map(
      blocks,
      [&](std::size_t b) {
        detail::BlockStats s;
        const std::size_t begin = b * detail::kAgentBlock;
        const std::size_t end = std::min(n, begin + detail::kAgentBlock);
        for (std::size_t agent = begin; agent < end; ++agent) {
          detail::AgentStream rng(config.seed, stream, agent);
          const double l = draw_likelihood(rng.uniform());
          const bool positive = rng.uniform() < l;
          const bool flip = rng.uniform() < config.epsilon_noise;

          ResponseDecision d = best_respond(l, policy, cost);
          if (flip && d.action == ResponseAction::kGame) {
            d = {ResponseAction::kStayRejected, 0.0, false, l};
          } else if (flip && d.action == ResponseAction::kStayRejected) {
            d = {ResponseAction::kGame, cost(l, tau), true, tau};
          }

          ++s.agents;
          if (d.accepted == positive) ++s.correct;
          if (positive) {
            ++s.positives;
            const double burden = l >= tau ? 0.0 : cost(l, tau);
            s.burden_sum += burden;
            s.burden_sq += burden * burden;
            const double u = d.accepted ? 1.0 - d.incurred_cost : 0.0;
            s.su_sum += u;
            s.su_sq += u * u;
          }
        }
        return s;
      },
      config.threads);

  detail::BlockStats total;
  for (const auto& s : stats) {
    total.agents += s.agents;
    total.correct += s.correct;
    total.positives += s.positives;
    total.burden_sum += s.burden_sum;
    total.burden_sq += s.burden_sq;
    total.su_sum += s.su_sum;
    total.su_sq += s.su_sq;
  }

  SimulationResult result;
  result.n_agents = total.agents;
  result.n_positives = total.positives;
  const double dn = static_cast<double>(total.agents);
  result.utility_hat = static_cast<double>(total.correct) / dn;
  result.utility_se =
      std::sqrt(result.utility_hat * (1.0 - result.utility_hat) / dn);
  if (total.positives == 0) {
    result.note = "no positive agents drawn; burden and social utility undefined";
    return result;
  }
  const double np = static_cast<double>(total.positives);
  result.burden_hat = total.burden_sum / np;
  result.burden_se =
      detail::sample_se(total.burden_sum, total.burden_sq, total.positives);
  result.social_utility_hat = total.su_sum / np;
  result.social_utility_se =
      detail::sample_se(total.su_sum, total.su_sq, total.positives);
  return result;
}

struct GapSimulationResult {
  SimulationResult a;
  SimulationResult b;
  std::optional<double> gap_hat;
  double gap_se = 0.0;
};

// Simulates both groups (n_agents each, independent streams) and estimates
// the burden gap B_b - B_a.
inline GapSimulationResult simulate_gap(const GroupedPopulation& pop,
                                        const std::string& a,
                                        const std::string& b, double tau,
                                        const SimulationConfig& config) {
  const Group& ga = pop.at(a);
  const Group& gb = pop.at(b);
  GapSimulationResult result;
  result.a = simulate(ga.dist, ga.cost, tau, config, 1);
  result.b = simulate(gb.dist, gb.cost, tau, config, 2);
  if (result.a.burden_hat && result.b.burden_hat) {
    result.gap_hat = *result.b.burden_hat - *result.a.burden_hat;
    result.gap_se = std::hypot(result.a.burden_se, result.b.burden_se);
  }
  return result;
}

struct AgreementEntry {
  double tau = 0.0;
  double utility_analytic = 0.0;
  double burden_analytic = 0.0;
  SimulationResult estimate;
  bool utility_flagged = false;
  bool burden_flagged = false;

  bool flagged() const { return utility_flagged || burden_flagged; }
};

struct AgreementReport {
  std::vector<AgreementEntry> entries;
  std::size_t flags = 0;
  std::size_t max_flags = 1;

  bool passed() const { return flags <= max_flags; }
};

inline constexpr double kAgreementSigmas = 3.0;

// |analytic - estimate| > 3 SE counts as a flag. A tiny absolute slack keeps
// zero-variance cases (all agents identical) from flagging on rounding.
inline bool outside_band(double analytic, double estimate, double se) {
  return std::abs(analytic - estimate) > kAgreementSigmas * se + 1e-12;
}

inline AgreementReport oracle_agreement(const LikelihoodDistribution& dist,
                                        const ValidatedCost& cost,
                                        std::span<const double> tau_grid,
                                        const SimulationConfig& config,
                                        std::size_t max_flags = 1) {
  detail::require_tau_grid(tau_grid);
  AgreementReport report;
  report.max_flags = max_flags;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    AgreementEntry e;
    e.tau = tau_grid[i];
    e.utility_analytic = strategic_utility(e.tau, dist, cost);
    e.burden_analytic = social_burden(e.tau, dist, cost);
    e.estimate = simulate(dist, cost, e.tau, config, i);
    e.utility_flagged = outside_band(e.utility_analytic, e.estimate.utility_hat,
                                     e.estimate.utility_se);
    e.burden_flagged =
        e.estimate.burden_hat &&
        outside_band(e.burden_analytic, *e.estimate.burden_hat,
                     e.estimate.burden_se);
    if (e.flagged()) ++report.flags;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace stratburden
