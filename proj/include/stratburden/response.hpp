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

// Best response of an individual to a published likelihood threshold.
//
// Acceptance is worth 1 and moving costs c_L(l, tau); an individual below the
// threshold games to exactly tau when c_L(l, tau) <= 1 (ties game).

#pragma once

#include <sstream>

#include "stratburden/costs.hpp"
#include "stratburden/detail/bisection.hpp"
#include "stratburden/error.hpp"

namespace stratburden {

class ThresholdPolicy {
 public:
  explicit ThresholdPolicy(double tau) : tau_(tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
      std::ostringstream os;
      os << "threshold " << tau << " outside [0, 1]";
      throw ValidationError(os.str());
    }
  }

  double tau() const { return tau_; }

  // The classifier 1{l >= tau}.
  bool accepts(double l) const { return l >= tau_; }

 private:
  double tau_;
};

enum class ResponseAction { kStayAccepted, kStayRejected, kGame };

struct ResponseDecision {
  ResponseAction action;
  double incurred_cost;
  bool accepted;
  double target_likelihood;
};

inline ResponseDecision best_respond(double l, const ThresholdPolicy& policy,
                                     const CostModel& cost) {
  if (!(l > 0.0 && l <= 1.0)) throw ValidationError("likelihood outside (0, 1]");
  const double tau = policy.tau();
  if (l >= tau) return {ResponseAction::kStayAccepted, 0.0, true, l};
  const double c = cost(l, tau);
  if (c <= 1.0) return {ResponseAction::kGame, c, true, tau};
  return {ResponseAction::kStayRejected, 0.0, false, l};
}

// l_tau = inf { l in [0, tau] : c_L(l, tau) <= 1 }.
inline double gaming_floor(const ThresholdPolicy& policy,
                           const ValidatedCost& cost) {
  const double tau = policy.tau();
  if (tau == 0.0 || cost(0.0, tau) <= 1.0) return 0.0;
  auto affordable = [&](double l) { return cost(l, tau) <= 1.0; };
  const detail::Bracket b = detail::bisect(affordable, 0.0, tau);
  return b.hi;
}

// Smallest likelihood accepted once everyone best-responds; the post-gaming
// acceptance set is exactly { l >= acceptance_floor }.
inline double acceptance_floor(const ThresholdPolicy& policy,
                               const ValidatedCost& cost) {
  return std::min(policy.tau(), gaming_floor(policy, cost));
}

}  // namespace stratburden
