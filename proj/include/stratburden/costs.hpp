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

// Manipulation costs expressed over outcome likelihoods, c_L(l, l'): the cost
// for an individual at likelihood l to look like one at likelihood l'.
//
// Four families are supported:
//   linear          max(alpha (l' - l), 0)
//   separable       max(c2(l') - c1(l), 0)
//   shift-invariant c0(l' - l) for l < l', else 0
//   scaled          kappa * base
//
// Analyses that rely on the outcome-monotonic structure (gaming sets are
// intervals, thresholds found by bisection) take a ValidatedCost, which can
// only be built from a CostModel that passes validate_outcome_monotonic.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stratburden/error.hpp"
#include "stratburden/scalar_map.hpp"

namespace stratburden {

class CostModel;

namespace cost {
struct Linear {
  double alpha;
  bool operator==(const Linear&) const = default;
};
struct Separable {
  ScalarMap c1;
  ScalarMap c2;
  bool operator==(const Separable&) const = default;
};
struct ShiftInvariant {
  ScalarMap c0;
  bool operator==(const ShiftInvariant&) const = default;
};
struct Scaled {
  double kappa;
  std::shared_ptr<const CostModel> base;
  // Compares the base by value.
  bool operator==(const Scaled& other) const;
};
}  // namespace cost

class CostModel {
 public:
  using Kind = std::variant<cost::Linear, cost::Separable,
                            cost::ShiftInvariant, cost::Scaled>;

  static CostModel linear(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw ValidationError("linear cost needs alpha > 0");
    }
    return CostModel(cost::Linear{alpha});
  }
  static CostModel separable(ScalarMap c1, ScalarMap c2) {
    return CostModel(cost::Separable{std::move(c1), std::move(c2)});
  }
  static CostModel shift_invariant(ScalarMap c0) {
    if (c0(0.0) != 0.0) throw ValidationError("shift-invariant cost needs c0(0) = 0");
    return CostModel(cost::ShiftInvariant{std::move(c0)});
  }
  static CostModel scaled(double kappa, CostModel base) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw ValidationError("scaled cost needs kappa > 0");
    }
    return CostModel(cost::Scaled{
        kappa, std::make_shared<const CostModel>(std::move(base))});
  }

  const Kind& kind() const { return kind_; }

  // Structural equality: same kinds and parameters at every layer.
  bool operator==(const CostModel&) const = default;

  // c_L(from, to) >= 0.
  double operator()(double from, double to) const {
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, cost::Linear>) {
            return std::max(k.alpha * (to - from), 0.0);
          } else if constexpr (std::is_same_v<T, cost::Separable>) {
            return std::max(k.c2(to) - k.c1(from), 0.0);
          } else if constexpr (std::is_same_v<T, cost::ShiftInvariant>) {
            return from < to ? k.c0(to - from) : 0.0;
          } else {
            return k.kappa * (*k.base)(from, to);
          }
        },
        kind_);
  }

  // True when every scalar map in the model carries an analytic derivative.
  bool has_analytic_partial() const {
    return std::visit(
        [](const auto& k) -> bool {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, cost::Linear>) {
            return true;
          } else if constexpr (std::is_same_v<T, cost::Separable>) {
            return k.c1.has_analytic_derivative();
          } else if constexpr (std::is_same_v<T, cost::ShiftInvariant>) {
            return k.c0.has_analytic_derivative();
          } else {
            return k.base->has_analytic_partial();
          }
        },
        kind_);
  }

  // Analytic d c_L(l, target) / dl. No region check; at l == target this is
  // the one-sided limit from below.
  double analytic_partial(double l, double target) const {
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, cost::Linear>) {
            return -k.alpha;
          } else if constexpr (std::is_same_v<T, cost::Separable>) {
            return -k.c1.derivative(l);
          } else if constexpr (std::is_same_v<T, cost::ShiftInvariant>) {
            return -k.c0.derivative(target - l);
          } else {
            return k.kappa * k.base->analytic_partial(l, target);
          }
        },
        kind_);
  }

 private:
  explicit CostModel(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

namespace cost {
inline bool Scaled::operator==(const Scaled& other) const {
  return kappa == other.kappa &&
         (base == other.base || *base == *other.base);
}
}  // namespace cost

inline double evaluate(const CostModel& model, double l_from, double l_to) {
  return model(l_from, l_to);
}

inline constexpr double kFiniteDifferenceStep = 1e-6;

// Central difference of l -> c_L(l, target), with the stencil clipped to
// [0, target]. At l == target it degenerates to a backward difference.
inline double partial_l_numeric(const CostModel& model, double l, double target,
                                double h = kFiniteDifferenceStep) {
  const double lo = std::max(l - h, 0.0);
  const double hi = std::min(l + h, target);
  return (model(hi, target) - model(lo, target)) / (hi - lo);
}

// d c_L(l, target) / dl on the positive-cost region l < target.
inline double partial_l(const CostModel& model, double l, double target) {
  if (!(l < target)) {
    throw ValidationError("derivative requested outside positive-cost region");
  }
  if (l < 0.0 || target > 1.0) {
    throw ValidationError("likelihoods must lie in [0, 1]");
  }
  return model.has_analytic_partial() ? model.analytic_partial(l, target)
                                      : partial_l_numeric(model, l, target);
}

// One-sided limit of d c_L(l, target) / dl as l -> target from below.
inline double partial_l_at_target(const CostModel& model, double target) {
  return model.has_analytic_partial()
             ? model.analytic_partial(target, target)
             : partial_l_numeric(model, target, target);
}

enum class MonotonicityClause { kZeroCost, kFirstArgument, kSecondArgument };

inline const char* to_string(MonotonicityClause clause) {
  switch (clause) {
    case MonotonicityClause::kZeroCost:
      return "zero-cost";
    case MonotonicityClause::kFirstArgument:
      return "first-argument";
    case MonotonicityClause::kSecondArgument:
      return "second-argument";
  }
  return "unknown";
}

struct MonotonicityViolation {
  double l;
  double l_prime;
  std::optional<double> l_double_prime;  // absent for the pairwise clause
  MonotonicityClause clause;
};

struct CostValidationReport {
  bool passed = true;
  // At most kMaxRecordedPerClause per clause, so every failing clause keeps a
  // witness.
  std::vector<MonotonicityViolation> violations;
  std::size_t violation_count = 0;

  static constexpr std::size_t kMaxRecordedPerClause = 32;

  void add(MonotonicityViolation v) {
    passed = false;
    ++violation_count;
    auto& recorded = recorded_[static_cast<std::size_t>(v.clause)];
    if (recorded < kMaxRecordedPerClause) {
      ++recorded;
      violations.push_back(v);
    }
  }

 private:
  std::array<std::size_t, 3> recorded_{};
};

inline std::string describe(const MonotonicityViolation& v) {
  std::ostringstream os;
  os << to_string(v.clause) << " clause fails at (" << v.l << ", " << v.l_prime;
  if (v.l_double_prime) os << ", " << *v.l_double_prime;
  os << ")";
  return os.str();
}

// 41 uniform points on [0.025, 0.975].
inline std::vector<double> default_validation_grid() {
  std::vector<double> grid(41);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = 0.025 + 0.95 * static_cast<double>(i) / 40.0;
  }
  return grid;
}

namespace detail {
inline void require_interior_grid(std::span<const double> grid,
                                  std::size_t min_points, const char* name) {
  if (grid.size() < min_points) {
    std::ostringstream os;
    os << name << " needs at least " << min_points << " points";
    throw ValidationError(os.str());
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) {
      throw ValidationError(std::string(name) + " points must lie in (0, 1)");
    }
    if (i > 0 && !(grid[i - 1] < grid[i])) {
      throw ValidationError(std::string(name) + " must be strictly increasing");
    }
  }
}
}  // namespace detail

// Checks the three outcome-monotonicity clauses over all grid pairs and
// ordered triples l < l' < l'':
//   zero-cost       c(l, l') > 0 iff l' > l
//   first argument  c(l, l'') > c(l', l'') > 0
//   second argument c(l, l'') > c(l, l') > 0
// Strict inequalities, no tolerance.
inline CostValidationReport validate_outcome_monotonic(
    const CostModel& model, std::span<const double> grid) {
  detail::require_interior_grid(grid, 3, "validation grid");
  const std::size_t n = grid.size();
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = model(grid[i], grid[j]);
  }
  auto at = [&](std::size_t i, std::size_t j) { return c[i * n + j]; };

  CostValidationReport report;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = at(i, j);
      const bool ok = std::isfinite(v) && v >= 0.0 && ((v > 0.0) == (j > i));
      if (!ok) {
        report.add({grid[i], grid[j], std::nullopt,
                    MonotonicityClause::kZeroCost});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!(at(i, k) > at(j, k) && at(j, k) > 0.0)) {
          report.add({grid[i], grid[j], grid[k],
                      MonotonicityClause::kFirstArgument});
        }
        if (!(at(i, k) > at(i, j) && at(i, j) > 0.0)) {
          report.add({grid[i], grid[j], grid[k],
                      MonotonicityClause::kSecondArgument});
        }
      }
    }
  }
  return report;
}

struct LikelihoodConditionResult {
  bool holds = true;
  // On failure: partial(l, tau_next) > partial(l, tau) + tolerance.
  std::optional<double> witness_l;
  std::optional<double> witness_tau;
  std::optional<double> witness_tau_next;
};

inline constexpr double kLikelihoodConditionTolerance = 1e-9;

// True iff d c_L(l, tau) / dl is nonincreasing in tau for every l, checked
// over tau_grid points above l.
inline LikelihoodConditionResult likelihood_condition(
    const CostModel& model, std::span<const double> l_grid,
    std::span<const double> tau_grid) {
  detail::require_interior_grid(l_grid, 1, "likelihood grid");
  detail::require_interior_grid(tau_grid, 2, "threshold grid");
  LikelihoodConditionResult result;
  for (double l : l_grid) {
    std::optional<double> prev_tau;
    double prev = 0.0;
    for (double tau : tau_grid) {
      if (!(l < tau)) continue;
      const double d = partial_l(model, l, tau);
      if (prev_tau && d > prev + kLikelihoodConditionTolerance) {
        result.holds = false;
        result.witness_l = l;
        result.witness_tau = *prev_tau;
        result.witness_tau_next = tau;
        return result;
      }
      prev = d;
      prev_tau = tau;
    }
  }
  return result;
}

// A CostModel that passed outcome-monotonicity validation.
class ValidatedCost {
 public:
  explicit ValidatedCost(CostModel model)
      : ValidatedCost(std::move(model), default_validation_grid()) {}

  ValidatedCost(CostModel model, std::span<const double> grid)
      : model_(std::move(model)) {
    const CostValidationReport report = validate_outcome_monotonic(model_, grid);
    if (!report.passed) {
      throw ValidationError(
          "cost must pass outcome-monotonicity validation: " +
          describe(report.violations.front()));
    }
  }

  const CostModel& model() const { return model_; }
  operator const CostModel&() const { return model_; }  // NOLINT
  double operator()(double from, double to) const { return model_(from, to); }

 private:
  CostModel model_;
};

// kappa * cost, preserving validation.
inline ValidatedCost scale_cost(double kappa, const ValidatedCost& cost) {
  return ValidatedCost(CostModel::scaled(kappa, cost.model()));
}

}  // namespace stratburden
