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

#include <cmath>

#include "stratburden/oracle.hpp"
#include "support/reference.hpp"

namespace sb = stratburden;

namespace {

const sb::ValidatedCost kLinear4{sb::CostModel::linear(4.0)};

sb::LikelihoodDistribution two_point() { return {{0.25, 0.75}, {0.5, 0.5}}; }

sb::SimulationConfig config(std::size_t n, std::uint64_t seed, double eps = 0.0) {
  sb::SimulationConfig c;
  c.n_agents = n;
  c.seed = seed;
  c.epsilon_noise = eps;
  return c;
}

}  // namespace

TEST(Simulate, TwoPointWithinThreeSigma) {
  const auto r = sb::simulate(two_point(), kLinear4, 0.75, config(100000, 1));
  EXPECT_LE(std::abs(r.utility_hat - 0.75), 3 * r.utility_se);
  ASSERT_TRUE(r.burden_hat.has_value());
  EXPECT_LE(std::abs(*r.burden_hat - 0.5), 3 * r.burden_se);
  EXPECT_EQ(r.n_agents, 100000u);
  EXPECT_GT(r.utility_se, 0.0);
}

TEST(Simulate, ProhibitiveCostMatchesNonstrategic) {
  const sb::ValidatedCost wall(sb::CostModel::linear(1e9));
  const auto d = sb::discretize_parametric(sb::family::Beta{2.0, 2.0}, 100);
  for (double tau : {0.3, 0.5, 0.8}) {
    const auto r = sb::simulate(d, wall, tau, config(100000, 2));
    EXPECT_LE(std::abs(r.utility_hat - sb::nonstrategic_utility(tau, d)), 3 * r.utility_se);
  }
}

TEST(Simulate, DeterministicAcrossRunsAndThreads) {
  const auto d = sb::discretize_parametric(sb::family::Uniform{}, 1000);
  auto c = config(50000, 3);
  c.threads = 1;
  const auto a = sb::simulate(d, kLinear4, 0.7, c);
  const auto b = sb::simulate(d, kLinear4, 0.7, c);
  c.threads = 8;
  const auto e = sb::simulate(d, kLinear4, 0.7, c);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, e);
  const auto other = sb::simulate(d, kLinear4, 0.7, config(50000, 4));
  EXPECT_NE(a.utility_hat, other.utility_hat);
}

TEST(Simulate, ConfigValidation) {
  EXPECT_THROW(sb::simulate(two_point(), kLinear4, 0.5, config(0, 1)), sb::ValidationError);
  EXPECT_THROW(sb::simulate(two_point(), kLinear4, 0.5, config(10, 1, 1.5)),
               sb::ValidationError);
}

TEST(Simulate, NoPositivesLeavesBurdenUndefined) {
  const sb::LikelihoodDistribution rare({1e-9}, {1.0});
  const auto r = sb::simulate(rare, kLinear4, 0.5, config(100, 5));
  EXPECT_EQ(r.n_positives, 0u);
  EXPECT_FALSE(r.burden_hat.has_value());
  EXPECT_FALSE(r.note.empty());
}

TEST(OracleAgreement, UniformElevenPoints) {
  const auto d = sb::discretize_parametric(sb::family::Uniform{}, 1000);
  const auto grid = sb::uniform_grid(0.0, 1.0, 11);
  const auto r = sb::oracle_agreement(d, kLinear4, grid, config(100000, 6));
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.flags, 1u);
  EXPECT_EQ(r.entries.size(), 11u);
}

TEST(OracleAgreement, TinyPopulationStillConsistent) {
  const auto d = sb::discretize_parametric(sb::family::Uniform{}, 1000);
  const auto grid = sb::uniform_grid(0.0, 1.0, 11);
  const auto r = sb::oracle_agreement(d, kLinear4, grid, config(100, 7));
  EXPECT_LE(r.flags, 2u);
  for (const auto& e : r.entries) EXPECT_GT(e.estimate.utility_se, 0.01);
}

TEST(OracleAgreement, NoisyAgentsAreDetected) {
  const auto d = sb::discretize_parametric(sb::family::Uniform{}, 1000);
  const auto grid = sb::uniform_grid(0.0, 1.0, 11);
  const auto r = sb::oracle_agreement(d, kLinear4, grid, config(100000, 8, 0.2));
  std::size_t utility_flags = 0;
  for (const auto& e : r.entries) utility_flags += e.utility_flagged ? 1 : 0;
  EXPECT_GE(utility_flags, 2u);
  EXPECT_FALSE(r.passed());
}

TEST(OracleConsistency, ErrorShrinksWithPopulation) {
  const auto d = sb::discretize_parametric(sb::family::Beta{2.0, 3.0}, 200);
  const double analytic = sb::strategic_utility(0.6, d, kLinear4);
  double err_small = 0.0, err_large = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    err_small += std::abs(sb::simulate(d, kLinear4, 0.6, config(1000, seed)).utility_hat - analytic);
    err_large +=
        std::abs(sb::simulate(d, kLinear4, 0.6, config(100000, seed)).utility_hat - analytic);
  }
  const double ratio = err_small / err_large;
  EXPECT_GT(ratio, 5.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(SimulateGap, IdenticalGroupsScaledCost) {
  const auto d = sb::discretize_parametric(sb::family::Uniform{}, 1000);
  const sb::GroupedPopulation pop({{"a", d, kLinear4}, {"b", d, sb::scale_cost(2.0, kLinear4)}});
  const auto r = sb::simulate_gap(pop, "a", "b", 0.7, config(100000, 9));
  ASSERT_TRUE(r.gap_hat.has_value());
  const double analytic = sb::social_gap(0.7, pop, "a", "b");
  EXPECT_LE(std::abs(*r.gap_hat - analytic), 3 * r.gap_se);
}
