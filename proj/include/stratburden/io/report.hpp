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

// CSV and JSON emission of curves and reports.

#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stratburden/costs.hpp"
#include "stratburden/equilibria.hpp"
#include "stratburden/error.hpp"
#include "stratburden/io/csv.hpp"
#include "stratburden/metrics.hpp"
#include "stratburden/oracle.hpp"

namespace stratburden::io {

using json = nlohmann::json;

inline constexpr const char* kTradeoffHeader =
    "tau,acceptance_floor,utility_strategic,utility_nonstrategic,burden,"
    "social_utility,burden_all,social_utility_all";
inline constexpr const char* kGapHeader = "tau,burden_a,burden_b,gap";

// Row invariants re-checked on write.
inline void check_tradeoff_row(const TradeoffPoint& p) {
  constexpr double kSlack = 1e-12;
  auto fail = [&](const char* what) {
    std::ostringstream os;
    os.precision(17);
    os << "invariant violated at tau=" << p.tau << ": " << what;
    throw ValidationError(os.str());
  };
  if (!(p.acceptance_floor <= p.tau)) fail("acceptance_floor <= tau");
  for (double u : {p.utility_strategic, p.utility_nonstrategic}) {
    if (!(u >= -kSlack && u <= 1.0 + kSlack)) fail("utility in [0, 1]");
  }
  if (!(p.burden >= 0.0) || !(p.burden_all >= 0.0)) fail("burden >= 0");
}

inline void write_tradeoff_csv(std::ostream& out,
                               std::span<const TradeoffPoint> points) {
  out << kTradeoffHeader << '\n';
  for (const auto& p : points) {
    check_tradeoff_row(p);
    out << format_double(p.tau) << ',' << format_double(p.acceptance_floor) << ','
        << format_double(p.utility_strategic) << ','
        << format_double(p.utility_nonstrategic) << ','
        << format_double(p.burden) << ',' << format_double(p.social_utility) << ','
        << format_double(p.burden_all) << ','
        << format_double(p.social_utility_all) << '\n';
  }
}

inline void write_gap_csv(std::ostream& out, const GapCurve& curve) {
  out << kGapHeader << '\n';
  for (const auto& p : curve.points) {
    out << format_double(p.tau) << ',' << format_double(p.burden_a) << ','
        << format_double(p.burden_b) << ',' << format_double(p.gap) << '\n';
  }
}

inline json tradeoff_to_json(std::span<const TradeoffPoint> points) {
  json rows = json::array();
  for (const auto& p : points) {
    check_tradeoff_row(p);
    rows.push_back({{"tau", p.tau},
                    {"acceptance_floor", p.acceptance_floor},
                    {"utility_strategic", p.utility_strategic},
                    {"utility_nonstrategic", p.utility_nonstrategic},
                    {"burden", p.burden},
                    {"social_utility", p.social_utility},
                    {"burden_all", p.burden_all},
                    {"social_utility_all", p.social_utility_all}});
  }
  return rows;
}

inline json gap_to_json(const GapCurve& curve) {
  json rows = json::array();
  for (const auto& p : curve.points) {
    rows.push_back({{"tau", p.tau},
                    {"burden_a", p.burden_a},
                    {"burden_b", p.burden_b},
                    {"gap", p.gap}});
  }
  return rows;
}

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json to_json(const NashCaseReport& r) {
  return {{"tau", r.tau},
          {"verified", r.verified()},
          {"case1_ok", r.case1_ok},
          {"case2_ok", r.case2_ok},
          {"case3_ok", r.case3_ok},
          {"gaming_interval", {r.gaming_floor, r.tau}},
          {"gaming_mass", r.gaming_mass},
          {"strategic_positive_rate", optional_to_json(r.strategic_positive_rate)},
          {"case1_witness", optional_to_json(r.case1_witness)},
          {"case2_witness", optional_to_json(r.case2_witness)}};
}

inline json to_json(const EquilibriumReport& r) {
  json j = {{"tau0", r.tau0},
            {"tau_star", r.tau_star},
            {"tau_argmax", r.tau_argmax},
            {"tau_nash_floor", optional_to_json(r.tau_nash_floor)},
            {"pareto_interval", {r.pareto_interval.first, r.pareto_interval.second}},
            {"nash_at_tau_star", to_json(r.nash_at_tau_star)},
            {"nash_at_floor", r.nash_at_floor ? to_json(*r.nash_at_floor) : json(nullptr)},
            {"nash_interval_failures", r.nash_interval_failures},
            {"diagnostics", r.diagnostics}};
  return j;
}

inline json to_json(const SimulationResult& r) {
  return {{"utility_hat", r.utility_hat},
          {"utility_se", r.utility_se},
          {"burden_hat", optional_to_json(r.burden_hat)},
          {"burden_se", r.burden_se},
          {"social_utility_hat", optional_to_json(r.social_utility_hat)},
          {"social_utility_se", r.social_utility_se},
          {"n_agents", r.n_agents},
          {"n_positives", r.n_positives},
          {"note", r.note}};
}

inline json to_json(const AgreementReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"tau", e.tau},
                       {"utility_analytic", e.utility_analytic},
                       {"burden_analytic", e.burden_analytic},
                       {"estimate", to_json(e.estimate)},
                       {"utility_flagged", e.utility_flagged},
                       {"burden_flagged", e.burden_flagged}});
  }
  return {{"passed", r.passed()},
          {"flags", r.flags},
          {"max_flags", r.max_flags},
          {"entries", entries}};
}

inline json to_json(const ReductionReport& r) {
  return {{"tau_f", r.tau_f},
          {"utility_classifier", r.utility_classifier},
          {"burden_classifier", r.burden_classifier},
          {"utility_threshold", r.utility_threshold},
          {"burden_threshold", r.burden_threshold},
          {"utility_diff", r.utility_diff()},
          {"burden_diff", r.burden_diff()}};
}

inline json to_json(const CostValidationReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"l", v.l},
                          {"l_prime", v.l_prime},
                          {"l_double_prime", optional_to_json(v.l_double_prime)},
                          {"clause", to_string(v.clause)}});
  }
  return {{"passed", r.passed},
          {"violation_count", r.violation_count},
          {"violations", violations}};
}

inline json to_json(const LikelihoodConditionResult& r) {
  return {{"holds", r.holds},
          {"witness_l", optional_to_json(r.witness_l)},
          {"witness_tau", optional_to_json(r.witness_tau)},
          {"witness_tau_next", optional_to_json(r.witness_tau_next)}};
}

}  // namespace stratburden::io
