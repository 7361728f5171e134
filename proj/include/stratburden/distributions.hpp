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

// Populations in outcome-likelihood space.
//
// A LikelihoodDistribution is a finite probability mass over likelihood values
// l = P(Y = 1 | X = x) in (0, 1]. Everything else in the library integrates
// over one of these. PositiveConditionalCDF is the CDF of the likelihood of a
// positive individual, i.e. of L | Y = 1, which is what the fairness results
// compare across groups.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stratburden/error.hpp"

namespace stratburden {

inline constexpr double kMassTolerance = 1e-12;

class LikelihoodDistribution {
 public:
  // Throws ValidationError unless support is strictly increasing in (0, 1],
  // every mass is positive and the masses sum to 1 within 1e-12.
  LikelihoodDistribution(std::vector<double> support, std::vector<double> mass)
      : support_(std::move(support)), mass_(std::move(mass)) {
    validate();
  }

  // Builds a distribution from unordered (likelihood, weight) pairs. Equal
  // likelihoods are merged, zero weights dropped and the total renormalized.
  static LikelihoodDistribution from_weighted_points(
      std::vector<std::pair<double, double>> points) {
    std::sort(points.begin(), points.end());
    std::vector<double> support;
    std::vector<double> mass;
    double total = 0.0;
    for (const auto& [l, w] : points) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ValidationError("point weights must be finite and nonnegative");
      }
      if (w == 0.0) continue;
      if (!support.empty() && support.back() == l) {
        mass.back() += w;
      } else {
        support.push_back(l);
        mass.push_back(w);
      }
      total += w;
    }
    if (support.empty() || total <= 0.0) {
      throw ValidationError("distribution has no positive mass");
    }
    for (double& m : mass) m /= total;
    return LikelihoodDistribution(std::move(support), std::move(mass));
  }

  std::span<const double> support() const { return support_; }
  std::span<const double> mass() const { return mass_; }
  std::size_t size() const { return support_.size(); }

  // P(Y = 1) = sum_i l_i p_i.
  double positive_rate() const {
    double rate = 0.0;
    for (std::size_t i = 0; i < size(); ++i) rate += support_[i] * mass_[i];
    return rate;
  }

  // Weights of the positive-conditional distribution, w_i = l_i p_i / P(Y=1).
  std::vector<double> positive_weights() const {
    const double rate = positive_rate();
    std::vector<double> w(size());
    for (std::size_t i = 0; i < size(); ++i) {
      w[i] = support_[i] * mass_[i] / rate;
    }
    return w;
  }

  bool operator==(const LikelihoodDistribution&) const = default;

 private:
  void validate() const {
    if (support_.empty()) {
      throw ValidationError("likelihood distribution must be nonempty");
    }
    if (support_.size() != mass_.size()) {
      throw ValidationError("support and mass have different lengths");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      const double l = support_[i];
      if (!(l > 0.0 && l <= 1.0)) {
        std::ostringstream os;
        os << "likelihood " << l << " outside (0, 1]";
        throw ValidationError(os.str());
      }
      if (i > 0 && !(support_[i - 1] < l)) {
        throw ValidationError("support must be strictly increasing");
      }
      if (!(mass_[i] > 0.0) || !std::isfinite(mass_[i])) {
        throw ValidationError("masses must be strictly positive");
      }
      total += mass_[i];
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "masses sum to " << total << ", expected 1";
      throw ValidationError(os.str());
    }
  }

  std::vector<double> support_;
  std::vector<double> mass_;
};

enum class CdfInterpolation {
  kStep,    // right-continuous step function through (grid, values)
  kLinear,  // piecewise linear through (grid, values), grid spans [0, 1]
};

// CDF of the outcome likelihood of a positive individual.
class PositiveConditionalCDF {
 public:
  PositiveConditionalCDF(std::vector<double> grid, std::vector<double> values,
                         CdfInterpolation interpolation)
      : grid_(std::move(grid)),
        values_(std::move(values)),
        interpolation_(interpolation) {
    validate();
  }

  // Tabulates an analytic CDF on n + 1 uniform points of [0, 1].
  static PositiveConditionalCDF tabulate(const std::function<double(double)>& F,
                                         std::size_t n) {
    if (n < 1) throw ValidationError("tabulation needs at least one interval");
    std::vector<double> grid(n + 1);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      grid[i] = static_cast<double>(i) / static_cast<double>(n);
      values[i] = F(grid[i]);
    }
    return PositiveConditionalCDF(std::move(grid), std::move(values),
                                  CdfInterpolation::kLinear);
  }

  double operator()(double l) const {
    if (interpolation_ == CdfInterpolation::kStep) {
      auto it = std::upper_bound(grid_.begin(), grid_.end(), l);
      if (it == grid_.begin()) return 0.0;
      return values_[static_cast<std::size_t>(it - grid_.begin()) - 1];
    }
    if (l <= grid_.front()) return values_.front();
    if (l >= grid_.back()) return values_.back();
    auto it = std::upper_bound(grid_.begin(), grid_.end(), l);
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double t = (l - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return values_[lo] + t * (values_[hi] - values_[lo]);
  }

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  CdfInterpolation interpolation() const { return interpolation_; }

  // Smallest and largest likelihood where the CDF can change.
  double lower_support() const {
    return interpolation_ == CdfInterpolation::kStep ? grid_.front() : 0.0;
  }
  double upper_support() const {
    return interpolation_ == CdfInterpolation::kStep ? grid_.back() : 1.0;
  }

 private:
  void validate() const {
    if (grid_.empty() || grid_.size() != values_.size()) {
      throw ValidationError("CDF grid and values must be nonempty and aligned");
    }
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (grid_[i] < 0.0 || grid_[i] > 1.0) {
        throw ValidationError("CDF grid must lie in [0, 1]");
      }
      if (i > 0 && !(grid_[i - 1] < grid_[i])) {
        throw ValidationError("CDF grid must be strictly increasing");
      }
      if (values_[i] < 0.0 || values_[i] > 1.0 + kMassTolerance) {
        throw ValidationError("CDF values must lie in [0, 1]");
      }
      if (i > 0 && values_[i] < values_[i - 1]) {
        throw ValidationError("CDF values must be nondecreasing");
      }
    }
    if (std::abs(values_.back() - 1.0) > kMassTolerance) {
      throw ValidationError("CDF must reach 1");
    }
    if (interpolation_ == CdfInterpolation::kLinear) {
      if (grid_.front() != 0.0 || grid_.back() != 1.0 ||
          std::abs(values_.front()) > kMassTolerance) {
        throw ValidationError("interpolated CDF must span [0, 1] from F(0)=0");
      }
    }
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  CdfInterpolation interpolation_;
};

// CDF of L | Y = 1 for a discrete population. Evaluated right-continuously.
inline PositiveConditionalCDF positive_conditional(
    const LikelihoodDistribution& dist) {
  const std::vector<double> w = dist.positive_weights();
  std::vector<double> cumulative(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    cumulative[i] = std::min(acc, 1.0);
  }
  const auto support = dist.support();
  return PositiveConditionalCDF(
      std::vector<double>(support.begin(), support.end()),
      std::move(cumulative), CdfInterpolation::kStep);
}

struct DominanceResult {
  bool dominated = false;             // F_b(l) > F_a(l) at every test point
  std::optional<double> witness;      // first l where it fails
  std::size_t points_checked = 0;
};

// Strict first-order dominance of group a over group b on a finite grid:
// true iff F_b(l) > F_a(l) for every l in interior_grid. Ties fail.
inline DominanceResult fosd_strict(const PositiveConditionalCDF& cdf_a,
                                   const PositiveConditionalCDF& cdf_b,
                                   std::span<const double> interior_grid) {
  if (interior_grid.empty()) throw ValidationError("no test points");
  DominanceResult result;
  for (double l : interior_grid) {
    if (!(l > 0.0 && l < 1.0)) {
      throw ValidationError("dominance test points must lie in (0, 1)");
    }
    ++result.points_checked;
    if (!(cdf_b(l) > cdf_a(l))) {
      result.witness = l;
      return result;
    }
  }
  result.dominated = true;
  return result;
}

// Uniform interior grid {k / (n + 1) : k = 1..n}.
inline std::vector<double> uniform_interior_grid(std::size_t n = 999) {
  std::vector<double> grid(n);
  for (std::size_t k = 1; k <= n; ++k) {
    grid[k - 1] = static_cast<double>(k) / static_cast<double>(n + 1);
  }
  return grid;
}

// Test points for comparing two CDFs: the union of both step supports and the
// default interior grid, restricted to [lowest support, highest support) where
// at least one of the CDFs is strictly between 0 and 1.
inline std::vector<double> dominance_test_grid(
    const PositiveConditionalCDF& cdf_a, const PositiveConditionalCDF& cdf_b,
    std::size_t n_default = 999) {
  const double lo = std::min(cdf_a.lower_support(), cdf_b.lower_support());
  const double hi = std::max(cdf_a.upper_support(), cdf_b.upper_support());
  std::vector<double> points = uniform_interior_grid(n_default);
  for (const auto* cdf : {&cdf_a, &cdf_b}) {
    if (cdf->interpolation() == CdfInterpolation::kStep) {
      points.insert(points.end(), cdf->grid().begin(), cdf->grid().end());
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::erase_if(points, [&](double l) {
    return !(l > 0.0 && l < 1.0) || l < lo || l >= hi;
  });
  return points;
}

namespace family {
struct Uniform {};
struct Beta {
  double a = 1.0;
  double b = 1.0;
};
struct TwoPoint {
  double l1 = 0.25;
  double l2 = 0.75;
  double p = 0.5;  // mass at l1
};
}  // namespace family

using ParametricFamily =
    std::variant<family::Uniform, family::Beta, family::TwoPoint>;

// n-point midpoint discretization of a parametric likelihood density on
// (0, 1]. The two-point family is passed through unchanged.
inline LikelihoodDistribution discretize_parametric(
    const ParametricFamily& fam, std::size_t n) {
  if (const auto* tp = std::get_if<family::TwoPoint>(&fam)) {
    if (!(tp->l1 > 0.0 && tp->l1 < tp->l2 && tp->l2 <= 1.0)) {
      throw ValidationError("two-point family needs 0 < l1 < l2 <= 1");
    }
    if (!(tp->p > 0.0 && tp->p < 1.0)) {
      throw ValidationError("two-point family needs 0 < p < 1");
    }
    return LikelihoodDistribution({tp->l1, tp->l2}, {tp->p, 1.0 - tp->p});
  }
  if (n < 2) throw ValidationError("discretization needs n >= 2");

  std::function<double(double)> density;
  if (std::holds_alternative<family::Uniform>(fam)) {
    density = [](double) { return 1.0; };
  } else {
    const auto& beta = std::get<family::Beta>(fam);
    if (!(beta.a > 0.0 && beta.b > 0.0) || !std::isfinite(beta.a) ||
        !std::isfinite(beta.b)) {
      throw ValidationError("beta shape parameters must be positive");
    }
    density = [beta](double x) {
      return std::pow(x, beta.a - 1.0) * std::pow(1.0 - x, beta.b - 1.0);
    };
  }

  const double dn = static_cast<double>(n);
  std::vector<double> support(n);
  std::vector<double> mass(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    support[i] = (static_cast<double>(i) + 0.5) / dn;
    mass[i] = density(support[i]);
    total += mass[i];
  }
  for (double& m : mass) m /= total;
  return LikelihoodDistribution(std::move(support), std::move(mass));
}

}  // namespace stratburden
