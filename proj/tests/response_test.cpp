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

#include "stratburden/costs.hpp"
#include "stratburden/error.hpp"
#include "stratburden/metrics.hpp"
#include "stratburden/response.hpp"
#include "support/instances.hpp"
#include "support/reference.hpp"

namespace sb = stratburden;

namespace {
const sb::ValidatedCost kLinear4{sb::CostModel::linear(4.0)};
}

TEST(BestRespond, Examples) {
  const sb::ThresholdPolicy p(0.75);
  auto d = sb::best_respond(0.8, p, kLinear4);
  EXPECT_EQ(d.action, sb::ResponseAction::kStayAccepted);
  EXPECT_EQ(d.incurred_cost, 0.0);
  EXPECT_TRUE(d.accepted);

  d = sb::best_respond(0.6, p, kLinear4);
  EXPECT_EQ(d.action, sb::ResponseAction::kGame);
  EXPECT_NEAR(d.incurred_cost, 0.6, 1e-15);
  EXPECT_EQ(d.target_likelihood, 0.75);
  EXPECT_TRUE(d.accepted);

  d = sb::best_respond(0.4, p, kLinear4);
  EXPECT_EQ(d.action, sb::ResponseAction::kStayRejected);
  EXPECT_FALSE(d.accepted);
}

TEST(BestRespond, TieGames) {
  // c(0.5, 0.75) = 1 exactly under Linear(4).
  const auto d = sb::best_respond(0.5, sb::ThresholdPolicy(0.75), kLinear4);
  EXPECT_EQ(d.action, sb::ResponseAction::kGame);
  EXPECT_EQ(d.incurred_cost, 1.0);
}

TEST(BestRespond, RejectsBadInput) {
  EXPECT_THROW(sb::ThresholdPolicy(-0.1), sb::ValidationError);
  EXPECT_THROW(sb::ThresholdPolicy(1.1), sb::ValidationError);
  EXPECT_THROW(sb::best_respond(0.0, sb::ThresholdPolicy(0.5), kLinear4), sb::ValidationError);
}

TEST(GamingFloor, Examples) {
  EXPECT_NEAR(sb::gaming_floor(sb::ThresholdPolicy(0.75), kLinear4), 0.5, 1e-12);
  EXPECT_EQ(sb::gaming_floor(sb::ThresholdPolicy(0.4), sb::ValidatedCost(sb::CostModel::linear(1.0))),
            0.0);
  const double f = sb::gaming_floor(sb::ThresholdPolicy(0.75), kLinear4);
  EXPECT_NEAR(kLinear4(f, 0.75), 1.0, 1e-8);
}

TEST(AcceptanceFloor, Examples) {
  EXPECT_NEAR(sb::acceptance_floor(sb::ThresholdPolicy(0.75), kLinear4), 0.5, 1e-12);
  const sb::ValidatedCost steep(sb::CostModel::linear(1000.0));
  EXPECT_NEAR(sb::acceptance_floor(sb::ThresholdPolicy(0.5), steep), 0.499, 1e-9);
  EXPECT_EQ(sb::acceptance_floor(sb::ThresholdPolicy(0.0), kLinear4), 0.0);
}

TEST(GamingFloor, LinearClosedForm) {
  for (double alpha : {0.5, 1.0, 2.0, 4.0, 10.0, 250.0}) {
    const sb::ValidatedCost c(sb::CostModel::linear(alpha));
    for (double tau : sb::uniform_interior_grid(99)) {
      EXPECT_NEAR(sb::gaming_floor(sb::ThresholdPolicy(tau), c),
                  ref::linear_gaming_floor(alpha, tau), 1e-8)
          << alpha << " " << tau;
    }
  }
}

TEST(Response, PropertyAcceptedIffAboveFloorAndGameOnlyWhenAffordable) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto instances = testing_support::random_instances(40, 32);
  std::vector<double> agents(1000);
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i] = (i + 1) / 1000.0;
  for (const auto& inst : instances) {
    for (int t = 0; t < 5; ++t) {
      const sb::ThresholdPolicy policy(unit(rng));
      const double floor = sb::acceptance_floor(policy, inst.cost);
      EXPECT_LE(floor, policy.tau());
      for (double l : agents) {
        const auto d = sb::best_respond(l, policy, inst.cost);
        EXPECT_EQ(d.accepted, l >= floor) << inst.name << " tau=" << policy.tau() << " l=" << l;
        if (d.action == sb::ResponseAction::kGame) {
          EXPECT_LE(d.incurred_cost, 1.0);
        }
        EXPECT_EQ(d.accepted, ref::accepted_after_response(l, policy.tau(), inst.ref_cost()));
      }
    }
  }
}

TEST(GamingFloor, PropertyNondecreasingInTau) {
  for (const auto& inst : testing_support::random_instances(60, 33)) {
    double prev = 0.0;
    for (double tau : sb::uniform_grid(0.0, 1.0, 201)) {
      const double f = sb::gaming_floor(sb::ThresholdPolicy(tau), inst.cost);
      EXPECT_GE(f, prev) << inst.name << " tau=" << tau;
      prev = f;
    }
  }
}
