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

// Scalar functionals of (population, cost, threshold).
//
//   utility   accuracy of the threshold classifier, before (non-strategic) or
//             after (strategic) individuals best-respond
//   burden    expected minimum cost a positive individual must pay to be
//             accepted, whether or not they actually move
//   social utility
//             expected realized utility of positive individuals
//
// The *_all variants weight by the full population instead of positives.
// social_burden_quadrature evaluates the burden through the integration by
// parts form -int_0^tau d c_L(l, tau)/dl F(l) dl, which gives an independent
// route to the same number.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stratburden/costs.hpp"
#include "stratburden/detail/parallel.hpp"
#include "stratburden/distributions.hpp"
#include "stratburden/error.hpp"
#include "stratburden/population.hpp"
#include "stratburden/response.hpp"

namespace stratburden {

namespace detail {

// Splits nested Scaled layers off a cost: returns (product of kappas, base).
inline std::pair<double, const CostModel*> peel_scale(const CostModel& cost) {
  double kappa = 1.0;
  const CostModel* base = &cost;
  while (const auto* s = std::get_if<cost::Scaled>(&base->kind())) {
    kappa *= s->kappa;
    base = s->base.get();
  }
  return {kappa, base};
}

// Accuracy when exactly { l >= floor } is accepted.
inline double accuracy_above(double floor, const LikelihoodDistribution& dist) {
  const auto support = dist.support();
  const auto mass = dist.mass();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += (support[i] >= floor ? support[i] : 1.0 - support[i]) * mass[i];
  }
  return acc;
}

// sum_i weight_i * c(l_i, tau) over l_i < tau, with scaled layers factored
// out of the sum.
inline double weighted_burden(double tau, const LikelihoodDistribution& dist,
                              std::span<const double> weights,
                              const CostModel& cost) {
  const auto [kappa, base] = peel_scale(cost);
  const auto support = dist.support();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size() && support[i] < tau; ++i) {
    acc += (*base)(support[i], tau) * weights[i];
  }
  return kappa * acc;
}

// Realized utility of an individual at l under best response.
inline double realized_utility(double l, double tau, const CostModel& cost) {
  if (l >= tau) return 1.0;
  const double c = cost(l, tau);
  return c <= 1.0 ? 1.0 - c : 0.0;
}

inline double weighted_social_utility(double tau,
                                      const LikelihoodDistribution& dist,
                                      std::span<const double> weights,
                                      const CostModel& cost) {
  const auto support = dist.support();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += realized_utility(support[i], tau, cost) * weights[i];
  }
  return acc;
}

inline void require_tau(double tau) { (void)ThresholdPolicy{tau}; }

}  // namespace detail

inline double nonstrategic_utility(double tau,
                                   const LikelihoodDistribution& dist) {
  detail::require_tau(tau);
  return detail::accuracy_above(tau, dist);
}

inline double strategic_utility(double tau, const LikelihoodDistribution& dist,
                                const ValidatedCost& cost) {
  return detail::accuracy_above(acceptance_floor(ThresholdPolicy{tau}, cost),
                                dist);
}

inline double individual_burden(double l, double tau, const CostModel& cost) {
  detail::require_tau(tau);
  return l >= tau ? 0.0 : cost(l, tau);
}

inline double social_burden(double tau, const LikelihoodDistribution& dist,
                            const CostModel& cost) {
  detail::require_tau(tau);
  return detail::weighted_burden(tau, dist, dist.positive_weights(), cost);
}

inline double social_utility(double tau, const LikelihoodDistribution& dist,
                             const CostModel& cost) {
  detail::require_tau(tau);
  return detail::weighted_social_utility(tau, dist, dist.positive_weights(),
                                         cost);
}

inline double burden_all(double tau, const LikelihoodDistribution& dist,
                         const CostModel& cost) {
  detail::require_tau(tau);
  return detail::weighted_burden(tau, dist, dist.mass(), cost);
}

inline double social_utility_all(double tau, const LikelihoodDistribution& dist,
                                 const CostModel& cost) {
  detail::require_tau(tau);
  return detail::weighted_social_utility(tau, dist, dist.mass(), cost);
}

namespace detail {

// k such that cost_b = k * cost_a, found by peeling Scaled layers off cost_b
// until the remainder equals cost_a structurally.
inline std::optional<double> relative_scale(const CostModel& cost_b,
                                            const CostModel& cost_a) {
  double k = 1.0;
  const CostModel* cur = &cost_b;
  while (true) {
    if (*cur == cost_a) return k;
    const auto* s = std::get_if<cost::Scaled>(&cur->kind());
    if (s == nullptr) return std::nullopt;
    k *= s->kappa;
    cur = s->base.get();
  }
}

// Burden of a, burden of b, and their gap. When b is a scaled copy of a with
// the same distribution the gap is factored as (k - 1) * B_a, so it is exact
// up to one rounding of that product.
struct GapTerms {
  double burden_a;
  double burden_b;
  double gap;
};

inline std::optional<double> shared_scale(const Group& ga, const Group& gb) {
  if (!(ga.dist == gb.dist)) return std::nullopt;
  return relative_scale(gb.cost, ga.cost);
}

inline GapTerms gap_terms(double tau, const Group& ga, const Group& gb,
                          std::optional<double> scale) {
  const double ba = social_burden(tau, ga.dist, ga.cost);
  if (scale) return {ba, *scale * ba, (*scale - 1.0) * ba};
  const double bb = social_burden(tau, gb.dist, gb.cost);
  return {ba, bb, bb - ba};
}

}  // namespace detail

// B_b(tau) - B_a(tau), each group under its own cost.
inline double social_gap(double tau, const GroupedPopulation& pop,
                         const std::string& a, const std::string& b) {
  const Group& ga = pop.at(a);
  const Group& gb = pop.at(b);
  return detail::gap_terms(tau, ga, gb, detail::shared_scale(ga, gb)).gap;
}

// S_a(tau) - S_b(tau): the gap under the social-utility measure, signed so a
// disadvantage for b is positive. Not monotone in tau in general.
inline double social_utility_gap(double tau, const GroupedPopulation& pop,
                                 const std::string& a, const std::string& b) {
  const Group& ga = pop.at(a);
  const Group& gb = pop.at(b);
  return social_utility(tau, ga.dist, ga.cost) -
         social_utility(tau, gb.dist, gb.cost);
}

inline constexpr std::size_t kDefaultQuadratureIntervals = 1000;

namespace detail {

// Composite trapezoid of integrand(l) * (-d c_L(l, tau)/dl) over [0, tau].
template <typename Integrand>
double burden_kernel_trapezoid(double tau, const CostModel& cost,
                               Integrand integrand, std::size_t n) {
  require_tau(tau);
  if (n < 1) throw ValidationError("quadrature needs at least one interval");
  if (tau == 0.0) return 0.0;
  const double h = tau / static_cast<double>(n);
  auto node = [&](std::size_t k) {
    if (k < n) {
      const double l = static_cast<double>(k) * h;
      return -partial_l(cost, l, tau) * integrand(l);
    }
    double slope = partial_l_at_target(cost, tau);
    if (!std::isfinite(slope)) {
      // Derivative blows up at the kink; use the last panel's midpoint.
      slope = partial_l(cost, tau - 0.5 * h, tau);
    }
    return -slope * integrand(tau);
  };
  double acc = 0.5 * (node(0) + node(n));
  for (std::size_t k = 1; k < n; ++k) acc += node(k);
  return acc * h;
}

}  // namespace detail

inline double social_burden_quadrature(
    double tau, const PositiveConditionalCDF& cdf, const CostModel& cost,
    std::size_t n = kDefaultQuadratureIntervals) {
  return detail::burden_kernel_trapezoid(
      tau, cost, [&](double l) { return cdf(l); }, n);
}

// int_0^tau d c_L(l, tau)/dl (F_a(l) - F_b(l)) dl with a shared cost.
inline double social_gap_quadrature(
    double tau, const PositiveConditionalCDF& cdf_a,
    const PositiveConditionalCDF& cdf_b, const CostModel& cost,
    std::size_t n = kDefaultQuadratureIntervals) {
  return detail::burden_kernel_trapezoid(
      tau, cost, [&](double l) { return cdf_b(l) - cdf_a(l); }, n);
}

struct TradeoffPoint {
  double tau;
  double acceptance_floor;
  double utility_strategic;
  double utility_nonstrategic;
  double burden;
  double social_utility;
  double burden_all;
  double social_utility_all;
};

struct GapPoint {
  double tau;
  double burden_a;
  double burden_b;
  double gap;
};

struct GapCurve {
  std::vector<GapPoint> points;
};

namespace detail {
inline void require_tau_grid(std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("threshold grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_tau(grid[i]);
    if (i > 0 && !(grid[i - 1] < grid[i])) {
      throw ValidationError("threshold grid must be strictly increasing");
    }
  }
}
}  // namespace detail

// n uniform points on [lo, hi], endpoints exact.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw ValidationError("grid needs n >= 2");
  if (!(lo < hi)) throw ValidationError("grid needs lo < hi");
  std::vector<double> grid(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + step * static_cast<double>(i);
  }
  grid.back() = hi;
  return grid;
}

inline TradeoffPoint tradeoff_point(double tau,
                                    const LikelihoodDistribution& dist,
                                    const ValidatedCost& cost) {
  const double floor = acceptance_floor(ThresholdPolicy{tau}, cost);
  const std::vector<double> w = dist.positive_weights();
  return TradeoffPoint{
      tau,
      floor,
      detail::accuracy_above(floor, dist),
      detail::accuracy_above(tau, dist),
      detail::weighted_burden(tau, dist, w, cost),
      detail::weighted_social_utility(tau, dist, w, cost),
      detail::weighted_burden(tau, dist, dist.mass(), cost),
      detail::weighted_social_utility(tau, dist, dist.mass(), cost),
  };
}

inline std::vector<TradeoffPoint> sweep(const LikelihoodDistribution& dist,
                                        const ValidatedCost& cost,
                                        std::span<const double> tau_grid,
                                        std::size_t threads = 0) {
  detail::require_tau_grid(tau_grid);
  return detail::parallel_map(
      tau_grid.size(),
      [&](std::size_t i) { return tradeoff_point(tau_grid[i], dist, cost); },
      threads);
}

inline GapCurve gap_sweep(const GroupedPopulation& pop, const std::string& a,
                          const std::string& b,
                          std::span<const double> tau_grid,
                          std::size_t threads = 0) {
  detail::require_tau_grid(tau_grid);
  const Group& ga = pop.at(a);
  const Group& gb = pop.at(b);
  const std::optional<double> scale = detail::shared_scale(ga, gb);
  GapCurve curve;
  curve.points = detail::parallel_map(
      tau_grid.size(),
      [&](std::size_t i) {
        const auto t = detail::gap_terms(tau_grid[i], ga, gb, scale);
        return GapPoint{tau_grid[i], t.burden_a, t.burden_b, t.gap};
      },
      threads);
  return curve;
}

}  // namespace stratburden
