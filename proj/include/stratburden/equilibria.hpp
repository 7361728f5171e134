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

// Solution concepts for the threshold game between an institution and
// strategic individuals.
//
//   tau0       0.5, the accuracy-optimal threshold when nobody games
//   tau_star   Stackelberg threshold: largest tau with c_L(0.5, tau) <= 1
//   tau_N      smallest Nash threshold; the Nash set is [tau_N, tau_star]
//
// A threshold tau is a Nash strategy when, given everyone's best response, a
// posterior-0.5 cut on the gamed features reproduces tau. verify_nash splits
// that into three checks over the support:
//   1. every l > tau has l >= 0.5
//   2. every l below the gaming floor has l < 0.5
//   3. P(Y = 1 | l in [gaming floor, tau]) >= 0.5
//
// reduce_classifier shows that any acceptance set over a finite feature
// universe is matched in utility and burden by the threshold at its least
// likely accepted point.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stratburden/costs.hpp"
#include "stratburden/detail/bisection.hpp"
#include "stratburden/distributions.hpp"
#include "stratburden/error.hpp"
#include "stratburden/metrics.hpp"
#include "stratburden/response.hpp"

namespace stratburden {

inline constexpr double kTau0 = 0.5;

// Posteriors within this distance of 0.5 count as ties, and ties accept.
inline constexpr double kPosteriorTieTolerance = 1e-12;

inline double stackelberg_threshold(const ValidatedCost& cost) {
  if (cost(kTau0, 1.0) <= 1.0) return 1.0;
  auto affordable = [&](double tau) { return cost(kTau0, tau) <= 1.0; };
  return detail::bisect(affordable, kTau0, 1.0).lo;
}

// Smallest grid threshold >= 0.5 maximizing strategic utility.
inline double argmax_utility(const LikelihoodDistribution& dist,
                             const ValidatedCost& cost,
                             std::span<const double> tau_grid) {
  detail::require_tau_grid(tau_grid);
  std::optional<double> best_tau;
  double best = -1.0;
  for (double tau : tau_grid) {
    if (tau < kTau0) continue;
    const double u = strategic_utility(tau, dist, cost);
    if (u > best) {
      best = u;
      best_tau = tau;
    }
  }
  if (!best_tau) throw ValidationError("threshold grid has no point >= 0.5");
  return *best_tau;
}

struct NashCaseReport {
  double tau = 0.0;
  double gaming_floor = 0.0;
  bool case1_ok = true;
  bool case2_ok = true;
  bool case3_ok = true;
  // P(Y = 1 | l in [gaming_floor, tau]); absent when the interval has no mass.
  std::optional<double> strategic_positive_rate;
  double gaming_mass = 0.0;
  std::optional<double> case1_witness;  // some l > tau with l < 0.5
  std::optional<double> case2_witness;  // some l < floor with l >= 0.5

  bool verified() const { return case1_ok && case2_ok && case3_ok; }
};

inline NashCaseReport verify_nash(double tau, const LikelihoodDistribution& dist,
                                  const ValidatedCost& cost) {
  NashCaseReport report;
  report.tau = tau;
  report.gaming_floor = gaming_floor(ThresholdPolicy{tau}, cost);
  const auto support = dist.support();
  const auto mass = dist.mass();
  double positives = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double l = support[i];
    if (l > tau) {
      if (l < kTau0 && report.case1_ok) {
        report.case1_ok = false;
        report.case1_witness = l;
      }
    } else if (l < report.gaming_floor) {
      if (l >= kTau0 && report.case2_ok) {
        report.case2_ok = false;
        report.case2_witness = l;
      }
    } else {
      report.gaming_mass += mass[i];
      positives += l * mass[i];
    }
  }
  if (report.gaming_mass > 0.0) {
    const double rate = positives / report.gaming_mass;
    report.strategic_positive_rate = rate;
    report.case3_ok = rate >= kTau0 - kPosteriorTieTolerance;
  }
  return report;
}

// n uniform points on [0.5, tau_star]; a single point when tau_star == 0.5.
inline std::vector<double> default_nash_grid(double tau_star,
                                             std::size_t n = 201) {
  if (!(tau_star > kTau0)) return {kTau0};
  return uniform_grid(kTau0, tau_star, n);
}

struct NashFloorResult {
  std::optional<double> tau_nash_floor;
  // Grid points at or above the floor that fail verification. Empty when the
  // interval structure holds on the grid.
  std::vector<double> interval_failures;
  std::size_t points_checked = 0;

  bool interval_holds() const {
    return tau_nash_floor.has_value() && interval_failures.empty();
  }
};

// Smallest grid threshold in [0.5, tau_star] that verifies. The grid's last
// point plays the role of tau_star; if it fails there is no floor.
inline NashFloorResult nash_floor(const LikelihoodDistribution& dist,
                                  const ValidatedCost& cost,
                                  std::span<const double> tau_grid) {
  detail::require_tau_grid(tau_grid);
  if (tau_grid.front() < kTau0) {
    throw ValidationError("Nash grid must start at or above 0.5");
  }
  std::vector<bool> ok(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    ok[i] = verify_nash(tau_grid[i], dist, cost).verified();
  }
  NashFloorResult result;
  result.points_checked = tau_grid.size();
  if (!ok.back()) {
    result.interval_failures.push_back(tau_grid.back());
    return result;
  }
  std::size_t first = 0;
  while (!ok[first]) ++first;
  result.tau_nash_floor = tau_grid[first];
  for (std::size_t i = first; i < tau_grid.size(); ++i) {
    if (!ok[i]) result.interval_failures.push_back(tau_grid[i]);
  }
  return result;
}

struct EquilibriumReport {
  double tau0 = kTau0;
  double tau_star = 0.0;
  double tau_argmax = 0.0;
  std::optional<double> tau_nash_floor;
  std::pair<double, double> pareto_interval{kTau0, kTau0};
  NashCaseReport nash_at_tau_star;
  std::optional<NashCaseReport> nash_at_floor;
  std::vector<double> nash_interval_failures;
  std::vector<std::string> diagnostics;
};

inline EquilibriumReport solve_equilibria(const LikelihoodDistribution& dist,
                                          const ValidatedCost& cost,
                                          std::span<const double> utility_grid,
                                          std::size_t nash_grid_n = 201) {
  detail::require_tau_grid(utility_grid);
  EquilibriumReport report;
  report.tau_star = stackelberg_threshold(cost);
  report.pareto_interval = {kTau0, report.tau_star};
  report.tau_argmax = argmax_utility(dist, cost, utility_grid);
  report.nash_at_tau_star = verify_nash(report.tau_star, dist, cost);

  const std::vector<double> nash_grid =
      default_nash_grid(report.tau_star, nash_grid_n);
  const NashFloorResult floor = nash_floor(dist, cost, nash_grid);
  report.tau_nash_floor = floor.tau_nash_floor;
  report.nash_interval_failures = floor.interval_failures;
  if (floor.tau_nash_floor) {
    report.nash_at_floor = verify_nash(*floor.tau_nash_floor, dist, cost);
  } else {
    report.diagnostics.push_back(
        "tau_star fails Nash verification; the support violates the "
        "interval hypothesis");
  }
  if (!floor.interval_failures.empty() && floor.tau_nash_floor) {
    report.diagnostics.push_back(
        "Nash set is not an interval on this grid");
  }

  double max_step = 0.0;
  for (std::size_t i = 1; i < utility_grid.size(); ++i) {
    max_step = std::max(max_step, utility_grid[i] - utility_grid[i - 1]);
  }
  if (std::abs(report.tau_argmax - report.tau_star) > max_step) {
    std::ostringstream os;
    os << "utility argmax " << report.tau_argmax
       << " differs from Stackelberg threshold " << report.tau_star
       << " by more than one grid step";
    report.diagnostics.push_back(os.str());
  }
  return report;
}

struct FeaturePoint {
  double likelihood;
  double mass;
};

// Finite feature space with a likelihood map and a feature-space cost that
// factors through likelihoods: c(x, x') = c_L(l(x), l(x')).
class FeatureUniverse {
 public:
  inline static constexpr double kConsistencyTolerance = 1e-12;

  FeatureUniverse(std::vector<FeaturePoint> points, ValidatedCost cost)
      : points_(std::move(points)), cost_(std::move(cost)) {
    validate_points();
    const std::size_t n = points_.size();
    matrix_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        matrix_[i * n + j] =
            cost_(points_[i].likelihood, points_[j].likelihood);
      }
    }
  }

  // Explicit feature-space cost matrix (row-major, from x to x'). Must agree
  // with the likelihood cost within kConsistencyTolerance.
  FeatureUniverse(std::vector<FeaturePoint> points, ValidatedCost cost,
                  std::vector<double> matrix)
      : points_(std::move(points)),
        cost_(std::move(cost)),
        matrix_(std::move(matrix)) {
    validate_points();
    const std::size_t n = points_.size();
    if (matrix_.size() != n * n) {
      throw ValidationError("feature cost matrix has the wrong size");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double expected =
            cost_(points_[i].likelihood, points_[j].likelihood);
        if (!(std::abs(matrix_[i * n + j] - expected) <=
              kConsistencyTolerance)) {
          std::ostringstream os;
          os << "feature cost c(" << i << ", " << j
             << ") does not factor through likelihoods";
          throw ValidationError(os.str());
        }
      }
    }
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<FeaturePoint>& points() const { return points_; }
  const ValidatedCost& likelihood_cost() const { return cost_; }
  double cost(std::size_t from, std::size_t to) const {
    return matrix_[from * points_.size() + to];
  }

  LikelihoodDistribution distribution() const {
    std::vector<std::pair<double, double>> weighted;
    weighted.reserve(points_.size());
    for (const auto& p : points_) weighted.emplace_back(p.likelihood, p.mass);
    return LikelihoodDistribution::from_weighted_points(std::move(weighted));
  }

 private:
  void validate_points() const {
    if (points_.empty()) throw ValidationError("feature universe is empty");
    double total = 0.0;
    for (const auto& p : points_) {
      if (!(p.likelihood > 0.0 && p.likelihood <= 1.0)) {
        throw ValidationError("feature likelihoods must lie in (0, 1]");
      }
      if (!(p.mass > 0.0)) throw ValidationError("feature masses must be > 0");
      total += p.mass;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw ValidationError("feature masses must sum to 1");
    }
  }

  std::vector<FeaturePoint> points_;
  ValidatedCost cost_;
  std::vector<double> matrix_;
};

struct ReductionReport {
  double tau_f = 0.0;
  double utility_classifier = 0.0;
  double burden_classifier = 0.0;
  double utility_threshold = 0.0;
  double burden_threshold = 0.0;

  double utility_diff() const {
    return std::abs(utility_classifier - utility_threshold);
  }
  double burden_diff() const {
    return std::abs(burden_classifier - burden_threshold);
  }
};

// Compares an arbitrary classifier (accept exactly `accepted`) with the
// threshold at min l over the accepted points. The classifier side is
// computed by brute force: each individual picks the feature point maximizing
// f(x') - c(x, x'), preferring acceptance on ties.
inline ReductionReport reduce_classifier(const FeatureUniverse& universe,
                                         std::span<const std::size_t> accepted) {
  if (accepted.empty()) throw ValidationError("tau(f) undefined");
  const std::size_t n = universe.size();
  std::vector<bool> in_set(n, false);
  for (std::size_t idx : accepted) {
    if (idx >= n) throw ValidationError("accepted index out of range");
    in_set[idx] = true;
  }

  ReductionReport report;
  report.tau_f = 1.0;
  for (std::size_t idx : accepted) {
    report.tau_f = std::min(report.tau_f, universe.points()[idx].likelihood);
  }

  double utility = 0.0;
  double burden = 0.0;
  double positive_rate = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const auto& p = universe.points()[x];
    double best_u = in_set[x] ? 1.0 : 0.0;
    bool best_accepted = in_set[x];
    double min_cost = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < n; ++y) {
      const double c = universe.cost(x, y);
      if (in_set[y]) min_cost = std::min(min_cost, c);
      const double u = (in_set[y] ? 1.0 : 0.0) - c;
      if (u > best_u || (u == best_u && in_set[y] && !best_accepted)) {
        best_u = u;
        best_accepted = in_set[y];
      }
    }
    utility += (best_accepted ? p.likelihood : 1.0 - p.likelihood) * p.mass;
    burden += min_cost * p.likelihood * p.mass;
    positive_rate += p.likelihood * p.mass;
  }
  report.utility_classifier = utility;
  report.burden_classifier = burden / positive_rate;

  const LikelihoodDistribution dist = universe.distribution();
  report.utility_threshold =
      strategic_utility(report.tau_f, dist, universe.likelihood_cost());
  report.burden_threshold =
      social_burden(report.tau_f, dist, universe.likelihood_cost());
  return report;
}

}  // namespace stratburden
