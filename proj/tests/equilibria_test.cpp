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

#include <random>

#include "stratburden/equilibria.hpp"
#include "support/instances.hpp"
#include "support/reference.hpp"

namespace sb = stratburden;

namespace {

sb::ValidatedCost linear(double alpha) { return sb::ValidatedCost(sb::CostModel::linear(alpha)); }

const sb::LikelihoodDistribution& uniform1000() {
  static const auto d = sb::discretize_parametric(sb::family::Uniform{}, 1000);
  return d;
}

}  // namespace

TEST(Stackelberg, ClosedForms) {
  for (double alpha : {0.5, 1.0, 2.0, 4.0, 10.0, 37.0}) {
    EXPECT_NEAR(sb::stackelberg_threshold(linear(alpha)), ref::linear_stackelberg(alpha), 1e-9)
        << alpha;
  }
  const sb::ValidatedCost quad(sb::CostModel::shift_invariant(sb::ScalarMap::power(2.0, 16.0)));
  EXPECT_NEAR(sb::stackelberg_threshold(quad), 0.75, 1e-9);
}

TEST(Stackelberg, PropertyBoundary) {
  for (const auto& inst : testing_support::random_instances(100, 51)) {
    const double t = sb::stackelberg_threshold(inst.cost);
    EXPECT_GE(t, 0.5);
    EXPECT_LE(inst.cost(0.5, t), 1.0) << inst.name;
    if (t < 1.0) {
      EXPECT_GT(inst.cost(0.5, std::min(1.0, t + 1e-6)), 1.0) << inst.name;
    }
  }
}

TEST(ArgmaxUtility, Examples) {
  const auto grid = sb::uniform_grid(0.0, 1.0, 501);
  const double step = 1.0 / 500;
  EXPECT_NEAR(sb::argmax_utility(uniform1000(), linear(4.0), grid), 0.75, step);

  const sb::LikelihoodDistribution high({0.92, 0.97}, {0.5, 0.5});
  EXPECT_EQ(sb::argmax_utility(high, linear(4.0), grid), 0.5);

  const std::vector<double> low = {0.1, 0.2};
  EXPECT_THROW(sb::argmax_utility(high, linear(4.0), low), sb::ValidationError);
}

TEST(ArgmaxUtility, PropertyDominatesGridAndHalf) {
  const auto grid = sb::uniform_grid(0.0, 1.0, 201);
  for (const auto& inst : testing_support::random_instances(100, 52)) {
    const double t = sb::argmax_utility(inst.dist, inst.cost, grid);
    EXPECT_GE(t, 0.5);
    EXPECT_LE(t, 1.0);
    const double u = sb::strategic_utility(t, inst.dist, inst.cost);
    EXPECT_GE(u, sb::strategic_utility(0.5, inst.dist, inst.cost));
    for (double tau : grid) {
      if (tau >= 0.5) {
        EXPECT_GE(u, sb::strategic_utility(tau, inst.dist, inst.cost));
      }
    }
  }
}

TEST(VerifyNash, CaseStructure) {
  const auto c = linear(4.0);
  EXPECT_TRUE(sb::verify_nash(0.75, uniform1000(), c).verified());
  // Below 0.5: gamers up to tau are mostly negatives.
  const auto low = sb::verify_nash(0.3, uniform1000(), c);
  EXPECT_FALSE(low.case3_ok);
  // Above tau*: individuals at l >= 0.5 are priced out.
  const auto high = sb::verify_nash(0.8, uniform1000(), c);
  EXPECT_FALSE(high.case2_ok);
  ASSERT_TRUE(high.case2_witness.has_value());
  EXPECT_GE(*high.case2_witness, 0.5);
}

TEST(NashFloor, LinearUniformClosedForm) {
  for (double alpha : {2.0, 4.0, 8.0}) {
    const auto c = linear(alpha);
    const double ts = sb::stackelberg_threshold(c);
    const auto grid = sb::default_nash_grid(ts);
    const double step = grid[1] - grid[0];
    const auto r = sb::nash_floor(uniform1000(), c, grid);
    ASSERT_TRUE(r.tau_nash_floor.has_value()) << alpha;
    EXPECT_NEAR(*r.tau_nash_floor, ref::linear_uniform_nash_floor(alpha), step) << alpha;
    EXPECT_TRUE(r.interval_holds());
  }
}

TEST(NashFloor, AllMassAboveHalf) {
  const sb::LikelihoodDistribution d({0.6, 0.8}, {0.5, 0.5});
  const auto c = linear(4.0);
  const auto r = sb::nash_floor(d, c, sb::default_nash_grid(sb::stackelberg_threshold(c)));
  ASSERT_TRUE(r.tau_nash_floor.has_value());
  EXPECT_EQ(*r.tau_nash_floor, 0.5);
}

TEST(NashFloor, RejectsGridBelowHalf) {
  const std::vector<double> grid = {0.4, 0.6};
  EXPECT_THROW(sb::nash_floor(uniform1000(), linear(4.0), grid), sb::ValidationError);
}

TEST(NashFloor, PropertyIntervalStructure) {
  std::size_t checked = 0;
  for (const auto& inst : testing_support::random_instances(100, 53)) {
    const double ts = sb::stackelberg_threshold(inst.cost);
    const auto grid = sb::default_nash_grid(ts);
    const auto r = sb::nash_floor(inst.dist, inst.cost, grid);
    if (!r.tau_nash_floor) continue;
    ++checked;
    const double tn = *r.tau_nash_floor;
    EXPECT_TRUE(sb::verify_nash(tn, inst.dist, inst.cost).verified()) << inst.name;
    EXPECT_TRUE(sb::verify_nash(ts, inst.dist, inst.cost).verified()) << inst.name;
    for (int k = 1; k <= 5; ++k) {
      const double tau = tn + (ts - tn) * k / 6.0;
      EXPECT_TRUE(sb::verify_nash(tau, inst.dist, inst.cost).verified())
          << inst.name << " tau=" << tau;
    }
    if (tn > 0.5 && grid.size() > 1) {
      const double below = tn - (grid[1] - grid[0]);
      EXPECT_FALSE(sb::verify_nash(below, inst.dist, inst.cost).verified()) << inst.name;
    }
  }
  EXPECT_GT(checked, 50u);
}

TEST(Equilibria, UniformLinearReport) {
  const auto c = linear(4.0);
  const auto r = sb::solve_equilibria(uniform1000(), c, sb::uniform_grid(0.0, 1.0, 201));
  EXPECT_NEAR(r.tau_star, 0.75, 1e-12);
  EXPECT_NEAR(r.tau_argmax, 0.75, 1.0 / 200);
  ASSERT_TRUE(r.tau_nash_floor.has_value());
  EXPECT_NEAR(*r.tau_nash_floor, 0.625, 0.25 / 200);
  EXPECT_TRUE(r.nash_at_tau_star.verified());
  EXPECT_TRUE(r.nash_interval_failures.empty());
  EXPECT_EQ(r.pareto_interval.first, 0.5);
  EXPECT_EQ(r.pareto_interval.second, r.tau_star);
}

namespace {

sb::FeatureUniverse five_point_universe() {
  return sb::FeatureUniverse({{0.2, 0.2}, {0.4, 0.2}, {0.6, 0.2}, {0.75, 0.2}, {0.9, 0.2}},
                             linear(4.0));
}

}  // namespace

TEST(Reduction, NonContiguousAcceptance) {
  const auto u = five_point_universe();
  const std::vector<std::size_t> accepted = {2, 4};  // {0.6, 0.9}
  const auto r = sb::reduce_classifier(u, accepted);
  EXPECT_EQ(r.tau_f, 0.6);
  EXPECT_LE(r.utility_diff(), 1e-12);
  EXPECT_LE(r.burden_diff(), 1e-12);
  std::vector<double> l, p;
  for (const auto& pt : u.points()) {
    l.push_back(pt.likelihood);
    p.push_back(pt.mass);
  }
  const auto c = linear(4.0);
  const auto brute = ref::classifier_outcome(l, p, {false, false, true, false, true},
                                             [&](double a, double b) { return c(a, b); });
  EXPECT_NEAR(r.utility_classifier, brute.utility, 1e-12);
  EXPECT_NEAR(r.burden_classifier, brute.burden, 1e-12);
}

TEST(Reduction, AcceptAll) {
  const auto u = five_point_universe();
  const std::vector<std::size_t> all = {0, 1, 2, 3, 4};
  const auto r = sb::reduce_classifier(u, all);
  EXPECT_EQ(r.tau_f, 0.2);
  EXPECT_NEAR(r.utility_threshold, u.distribution().positive_rate(), 1e-12);
  EXPECT_EQ(r.burden_threshold, 0.0);
  EXPECT_THROW(sb::reduce_classifier(u, std::vector<std::size_t>{}), sb::ValidationError);
}

TEST(Reduction, MatrixMustMatchCost) {
  std::vector<sb::FeaturePoint> pts = {{0.3, 0.5}, {0.7, 0.5}};
  std::vector<double> m = {0.0, 1.6, 0.0, 0.0};
  EXPECT_NO_THROW(sb::FeatureUniverse(pts, linear(4.0), m));
  m[1] = 1.7;
  EXPECT_THROW(sb::FeatureUniverse(pts, linear(4.0), m), sb::ValidationError);
}

TEST(Reduction, RandomUniversesMatchBruteForce) {
  std::mt19937_64 rng(54);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto instances = testing_support::random_instances(100, 55);
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<std::pair<double, double>> raw;
    for (std::size_t i = 0; i < n; ++i) raw.emplace_back(0.01 + 0.99 * unit(rng), 0.1 + unit(rng));
    const auto dist = sb::LikelihoodDistribution::from_weighted_points(raw);
    std::vector<sb::FeaturePoint> pts;
    for (std::size_t i = 0; i < dist.size(); ++i) pts.push_back({dist.support()[i], dist.mass()[i]});
    const auto& cost = instances[trial].cost;
    const sb::FeatureUniverse u(pts, cost);
    std::vector<bool> mask(pts.size());
    std::vector<std::size_t> accepted;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      mask[i] = rng() % 2 == 0;
      if (mask[i]) accepted.push_back(i);
    }
    if (accepted.empty()) {
      mask.back() = true;
      accepted.push_back(pts.size() - 1);
    }
    const auto r = sb::reduce_classifier(u, accepted);
    EXPECT_LE(r.utility_diff(), 1e-12) << trial;
    EXPECT_LE(r.burden_diff(), 1e-12) << trial;
    std::vector<double> l, p;
    for (const auto& pt : pts) {
      l.push_back(pt.likelihood);
      p.push_back(pt.mass);
    }
    const auto brute = ref::classifier_outcome(l, p, mask, instances[trial].ref_cost());
    EXPECT_NEAR(r.utility_threshold, brute.utility, 1e-12) << trial;
    EXPECT_NEAR(r.burden_threshold, brute.burden, 1e-12) << trial;
  }
}
