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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "stratburden/costs.hpp"
#include "stratburden/error.hpp"
#include "stratburden/metrics.hpp"
#include "support/instances.hpp"

namespace sb = stratburden;

namespace {

sb::CostModel quadratic16() {
  return sb::CostModel::shift_invariant(sb::ScalarMap::power(2.0, 16.0));
}

std::vector<sb::CostModel> builtin_models() {
  return {
      sb::CostModel::linear(4.0),
      sb::CostModel::linear(0.5),
      quadratic16(),
      sb::CostModel::shift_invariant(sb::ScalarMap::power(1.5, 3.0)),
      sb::CostModel::separable(sb::ScalarMap::power(2.0, 5.0), sb::ScalarMap::power(2.0, 5.0)),
      sb::CostModel::separable(sb::ScalarMap::polynomial({0.0, 1.0, 2.0}),
                               sb::ScalarMap::polynomial({0.0, 1.0, 2.0})),
      sb::CostModel::scaled(2.0, sb::CostModel::linear(4.0)),
      sb::CostModel::scaled(3.0, quadratic16()),
  };
}

std::vector<double> interior(std::size_t n) { return sb::uniform_interior_grid(n); }

}  // namespace

TEST(CostEvaluate, Examples) {
  EXPECT_DOUBLE_EQ(sb::evaluate(sb::CostModel::linear(4.0), 0.5, 0.75), 1.0);
  for (const auto& m : builtin_models()) EXPECT_EQ(sb::evaluate(m, 0.9, 0.3), 0.0);
  EXPECT_NEAR(sb::evaluate(sb::CostModel::scaled(2.0, sb::CostModel::linear(4.0)), 0.5, 0.6),
              0.8, 1e-15);
}

TEST(CostEvaluate, PropertyNonnegativeAndZeroExactlyDownward) {
  const auto grid = interior(41);
  for (const auto& m : builtin_models()) {
    for (double a : grid) {
      for (double b : grid) {
        const double v = m(a, b);
        EXPECT_GE(v, 0.0);
        EXPECT_EQ(v == 0.0, b <= a) << a << " " << b;
      }
    }
  }
}

TEST(CostEvaluate, ScaledIsExactMultiple) {
  const auto grid = interior(41);
  for (const auto& base : builtin_models()) {
    const auto scaled = sb::CostModel::scaled(2.5, base);
    for (double a : grid) {
      for (double b : grid) EXPECT_EQ(scaled(a, b), 2.5 * base(a, b));
    }
  }
}

TEST(CostConstruction, RejectsBadParameters) {
  EXPECT_THROW(sb::CostModel::linear(0.0), sb::ValidationError);
  EXPECT_THROW(sb::CostModel::linear(-1.0), sb::ValidationError);
  EXPECT_THROW(sb::CostModel::scaled(0.0, sb::CostModel::linear(1.0)), sb::ValidationError);
  EXPECT_THROW(sb::CostModel::shift_invariant(sb::ScalarMap::polynomial({1.0, 1.0})),
               sb::ValidationError);
}

TEST(PartialL, Examples) {
  EXPECT_DOUBLE_EQ(sb::partial_l(sb::CostModel::linear(4.0), 0.3, 0.7), -4.0);
  const auto sq = sb::CostModel::shift_invariant(sb::ScalarMap::power(2.0, 1.0));
  EXPECT_NEAR(sb::partial_l(sq, 0.4, 0.7), -0.6, 1e-12);
  EXPECT_THROW(sb::partial_l(sb::CostModel::linear(4.0), 0.7, 0.7), sb::ValidationError);
  try {
    (void)sb::partial_l(sb::CostModel::linear(4.0), 0.8, 0.7);
    FAIL();
  } catch (const sb::ValidationError& e) {
    EXPECT_STREQ(e.what(), "derivative requested outside positive-cost region");
  }
}

TEST(PartialL, FiniteDifferenceMatchesAnalytic) {
  const auto grid = interior(50);
  for (const auto& m : builtin_models()) {
    double worst = 0.0;
    for (double l : grid) {
      for (double t : grid) {
        if (!(l < t)) continue;
        const double a = m.analytic_partial(l, t);
        const double n = sb::partial_l_numeric(m, l, t);
        EXPECT_LE(a, 0.0);
        worst = std::max(worst, std::abs(a - n));
      }
    }
    EXPECT_LE(worst, 1e-5);
  }
  // Linear: agreement within 1e-6.
  const auto lin = sb::CostModel::linear(4.0);
  for (double l : grid) {
    for (double t : grid) {
      if (l < t) {
        EXPECT_NEAR(sb::partial_l_numeric(lin, l, t), -4.0, 1e-6);
      }
    }
  }
}

TEST(PartialL, NumericFallbackWithoutAnalyticDerivative) {
  const auto m = sb::CostModel::shift_invariant(
      sb::ScalarMap(sb::scalar::Power{2.0, 16.0}, /*analytic_derivative=*/false));
  ASSERT_FALSE(m.has_analytic_partial());
  EXPECT_NEAR(sb::partial_l(m, 0.5, 0.75), -8.0, 1e-6);
}

TEST(ValidateCost, LinearPasses) {
  const auto grid = sb::uniform_grid(0.02, 0.98, 21);
  const auto r = sb::validate_outcome_monotonic(sb::CostModel::linear(1.0), grid);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.violation_count, 0u);
}

TEST(ValidateCost, DecreasingSecondMapFailsWithTriple) {
  const auto bad = sb::CostModel::separable(sb::ScalarMap::polynomial({0.0, 1.0}),
                                            sb::ScalarMap::polynomial({1.0, -1.0}));
  const auto r = sb::validate_outcome_monotonic(bad, sb::default_validation_grid());
  EXPECT_FALSE(r.passed);
  const auto it = std::find_if(r.violations.begin(), r.violations.end(), [](const auto& v) {
    return v.clause == sb::MonotonicityClause::kSecondArgument;
  });
  ASSERT_NE(it, r.violations.end());
  EXPECT_TRUE(it->l_double_prime.has_value());
  EXPECT_LT(it->l, it->l_prime);
  EXPECT_LT(it->l_prime, *it->l_double_prime);
  EXPECT_THROW(sb::ValidatedCost{bad}, sb::ValidationError);
}

TEST(ValidateCost, PlateauFails) {
  // c0 flat on [0.2, 0.4]: strictness is required.
  const auto flat = sb::CostModel::shift_invariant(
      sb::ScalarMap::table({0.0, 0.2, 0.4, 1.0}, {0.0, 1.0, 1.0, 2.0}));
  EXPECT_FALSE(sb::validate_outcome_monotonic(flat, sb::default_validation_grid()).passed);
}

TEST(ValidateCost, ScaledValidPasses) {
  for (double kappa : {0.1, 1.0, 2.0, 50.0}) {
    for (const auto& base : builtin_models()) {
      EXPECT_TRUE(sb::validate_outcome_monotonic(sb::CostModel::scaled(kappa, base),
                                                 sb::default_validation_grid())
                      .passed);
    }
  }
}

TEST(LikelihoodCondition, LinearAndConvexHold) {
  const auto grid = interior(41);
  for (double alpha : {0.5, 1.0, 4.0, 100.0}) {
    EXPECT_TRUE(sb::likelihood_condition(sb::CostModel::linear(alpha), grid, grid).holds);
  }
  EXPECT_TRUE(sb::likelihood_condition(quadratic16(), grid, grid).holds);
  EXPECT_TRUE(sb::likelihood_condition(
                  sb::CostModel::shift_invariant(sb::ScalarMap::power(3.0, 2.0)), grid, grid)
                  .holds);
}

TEST(LikelihoodCondition, ConcaveFailsWithWitness) {
  const auto grid = interior(41);
  const auto sqrt_cost = sb::CostModel::shift_invariant(sb::ScalarMap::power(0.5, 1.0));
  const auto r = sb::likelihood_condition(sqrt_cost, grid, grid);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness_l && r.witness_tau && r.witness_tau_next);
  EXPECT_LT(*r.witness_tau, *r.witness_tau_next);
  EXPECT_GT(sb::partial_l(sqrt_cost, *r.witness_l, *r.witness_tau_next),
            sb::partial_l(sqrt_cost, *r.witness_l, *r.witness_tau));
}

TEST(ScalarMap, TableAndPolynomial) {
  const auto t = sb::ScalarMap::table({0.0, 0.5, 1.0}, {0.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(t(0.25), 0.5);
  EXPECT_DOUBLE_EQ(t(0.75), 2.0);
  EXPECT_DOUBLE_EQ(t.derivative(0.75), 4.0);
  const auto p = sb::ScalarMap::polynomial({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(p(2.0), 17.0);
  EXPECT_DOUBLE_EQ(p.derivative(2.0), 14.0);
  EXPECT_THROW(sb::ScalarMap::table({0.0, 0.0}, {0.0, 1.0}), sb::ValidationError);
}

TEST(ValidatedCost, RandomInstancesValidate) {
  for (const auto& inst : testing_support::random_instances(100, 21)) {
    EXPECT_TRUE(sb::validate_outcome_monotonic(inst.cost, sb::default_validation_grid()).passed)
        << inst.name;
  }
}
