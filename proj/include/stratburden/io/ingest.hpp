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

// Score-space ingestion.
//
// Credit-score style data comes as per-group score CDFs plus a repayment
// probability per score. Because repayment is monotone in the score, the
// score masses map onto likelihood space through l = repay_prob(score).
//
// File layouts (header lines are exact):
//   cdf file           score,group,cdf          one row per (score, group)
//   performance file   score,repay_prob
//   distribution file  likelihood,mass[,group]

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stratburden/distributions.hpp"
#include "stratburden/error.hpp"
#include "stratburden/io/csv.hpp"

namespace stratburden::io {

inline constexpr double kLikelihoodFloor = 1e-6;
inline constexpr double kCdfEndTolerance = 1e-6;

struct ScoreDataset {
  std::vector<double> scores;                        // strictly increasing
  std::vector<std::string> groups;                   // first-appearance order
  std::map<std::string, std::vector<double>> cdf;    // aligned with scores
  std::vector<double> repay_prob;                    // aligned with scores

  // repay_prob at an arbitrary score, linearly interpolated.
  double likelihood_at(double score) const {
    if (score < scores.front() || score > scores.back()) {
      std::ostringstream os;
      os << "score " << score << " outside the data range [" << scores.front()
         << ", " << scores.back() << "]";
      throw ValidationError(os.str());
    }
    auto it = std::lower_bound(scores.begin(), scores.end(), score);
    const std::size_t hi = static_cast<std::size_t>(it - scores.begin());
    if (scores[hi] == score || hi == 0) return repay_prob[hi];
    const std::size_t lo = hi - 1;
    const double t = (score - scores[lo]) / (scores[hi] - scores[lo]);
    return repay_prob[lo] + t * (repay_prob[hi] - repay_prob[lo]);
  }

  // Score masses of one group, from the differenced CDF.
  std::vector<double> score_mass(const std::string& group) const {
    auto it = cdf.find(group);
    if (it == cdf.end()) throw ValidationError("missing group '" + group + "'");
    const auto& F = it->second;
    std::vector<double> mass(F.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      mass[i] = F[i] - prev;
      prev = F[i];
    }
    return mass;
  }

  // CDF over scores of the positives (repayers) of one group.
  std::vector<double> positive_score_cdf(const std::string& group) const {
    const std::vector<double> mass = score_mass(group);
    std::vector<double> out(mass.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) total += repay_prob[i] * mass[i];
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      acc += repay_prob[i] * mass[i];
      out[i] = acc / total;
    }
    return out;
  }
};

struct CdfRows {
  std::vector<double> scores;
  std::vector<std::string> groups;
  std::map<std::string, std::map<double, double>> values;
};

inline CdfRows parse_cdf_table(const CsvTable& table, const std::string& source) {
  require_header(table, {"score", "group", "cdf"}, source);
  CdfRows rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = source + ":" + std::to_string(table.line_numbers[r]);
    const double score = parse_double(table.rows[r][0], where);
    const std::string& group = table.rows[r][1];
    const double value = parse_double(table.rows[r][2], where);
    if (group.empty()) throw ValidationError(where + ": empty group label");
    if (!(value >= 0.0 && value <= 1.0 + kCdfEndTolerance)) {
      throw ValidationError(where + ": cdf value outside [0, 1]");
    }
    if (!rows.values.contains(group)) rows.groups.push_back(group);
    if (!rows.values[group].emplace(score, value).second) {
      throw ValidationError(where + ": duplicate (score, group) row");
    }
    rows.scores.push_back(score);
  }
  std::sort(rows.scores.begin(), rows.scores.end());
  rows.scores.erase(std::unique(rows.scores.begin(), rows.scores.end()),
                    rows.scores.end());
  if (rows.scores.empty()) throw ValidationError(source + ": no rows");
  return rows;
}

// Builds a dataset from parsed cdf rows and (score, repay_prob) pairs.
inline ScoreDataset make_score_dataset(
    const CdfRows& rows, std::vector<std::pair<double, double>> performance,
    const std::string& perf_source) {
  if (performance.empty()) throw ValidationError(perf_source + ": no rows");
  std::sort(performance.begin(), performance.end());
  for (std::size_t i = 1; i < performance.size(); ++i) {
    if (performance[i].first == performance[i - 1].first) {
      throw ValidationError(perf_source + ": duplicate score " +
                            format_double(performance[i].first));
    }
    if (performance[i].second < performance[i - 1].second) {
      throw ValidationError(
          perf_source + ": repay_prob must be nondecreasing in score; first "
          "inversion at score " + format_double(performance[i].first));
    }
  }
  for (const auto& [s, p] : performance) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError(perf_source + ": repay_prob outside [0, 1] at score " +
                            format_double(s));
    }
  }

  ScoreDataset data;
  data.scores = rows.scores;
  data.groups = rows.groups;

  ScoreDataset perf_only;
  for (const auto& [s, p] : performance) {
    perf_only.scores.push_back(s);
    perf_only.repay_prob.push_back(p);
  }
  data.repay_prob.reserve(data.scores.size());
  for (double s : data.scores) data.repay_prob.push_back(perf_only.likelihood_at(s));

  for (const auto& g : data.groups) {
    const auto& by_score = rows.values.at(g);
    std::vector<double> F;
    F.reserve(data.scores.size());
    double prev = 0.0;
    for (double s : data.scores) {
      auto it = by_score.find(s);
      if (it == by_score.end()) {
        throw ValidationError("group '" + g + "' has no cdf row for score " +
                              format_double(s));
      }
      if (it->second < prev) {
        throw ValidationError("cdf of group '" + g +
                              "' decreases at score " + format_double(s));
      }
      prev = it->second;
      F.push_back(it->second);
    }
    if (std::abs(F.back() - 1.0) > kCdfEndTolerance) {
      throw ValidationError("cdf of group '" + g + "' does not reach 1");
    }
    for (double& v : F) v = std::min(v / F.back(), 1.0);
    data.cdf.emplace(g, std::move(F));
  }
  return data;
}

inline ScoreDataset read_score_dataset(const std::filesystem::path& cdf_path,
                                       const std::filesystem::path& perf_path) {
  const CdfRows rows = parse_cdf_table(read_csv_file(cdf_path), cdf_path.string());
  const CsvTable perf = read_csv_file(perf_path);
  require_header(perf, {"score", "repay_prob"}, perf_path.string());
  std::vector<std::pair<double, double>> performance;
  for (std::size_t r = 0; r < perf.rows.size(); ++r) {
    const std::string where =
        perf_path.string() + ":" + std::to_string(perf.line_numbers[r]);
    performance.emplace_back(parse_double(perf.rows[r][0], where),
                             parse_double(perf.rows[r][1], where));
  }
  return make_score_dataset(rows, std::move(performance), perf_path.string());
}

struct IngestedGroup {
  std::string label;
  LikelihoodDistribution dist;
  PositiveConditionalCDF positive_cdf;
  std::size_t clipped = 0;  // scores whose likelihood was raised to the floor
};

struct IngestResult {
  ScoreDataset data;
  std::vector<IngestedGroup> groups;
  std::size_t clipped_total = 0;

  const IngestedGroup& group(const std::string& label) const {
    for (const auto& g : groups) {
      if (g.label == label) return g;
    }
    throw ValidationError("missing group '" + label + "'");
  }
};

inline IngestResult ingest_scores(ScoreDataset data) {
  IngestResult result;
  for (const auto& label : data.groups) {
    const std::vector<double> mass = data.score_mass(label);
    std::vector<std::pair<double, double>> points;
    std::size_t clipped = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if (mass[i] <= 0.0) continue;
      double l = data.repay_prob[i];
      if (l < kLikelihoodFloor) {
        l = kLikelihoodFloor;
        ++clipped;
      }
      points.emplace_back(l, mass[i]);
    }
    auto dist = LikelihoodDistribution::from_weighted_points(std::move(points));
    auto cdf = positive_conditional(dist);
    result.clipped_total += clipped;
    result.groups.push_back({label, std::move(dist), std::move(cdf), clipped});
  }
  result.data = std::move(data);
  return result;
}

inline IngestResult ingest_scores(const std::filesystem::path& cdf_path,
                                  const std::filesystem::path& perf_path) {
  return ingest_scores(read_score_dataset(cdf_path, perf_path));
}

struct LabelledDistribution {
  std::string label;  // empty when the file has no group column
  LikelihoodDistribution dist;
};

inline void write_distribution_csv(std::ostream& out,
                                   const std::vector<LabelledDistribution>& dists) {
  const bool grouped = dists.size() > 1 ||
                       (dists.size() == 1 && !dists.front().label.empty());
  out << (grouped ? "likelihood,mass,group\n" : "likelihood,mass\n");
  for (const auto& d : dists) {
    for (std::size_t i = 0; i < d.dist.size(); ++i) {
      out << format_double(d.dist.support()[i]) << ','
          << format_double(d.dist.mass()[i]);
      if (grouped) out << ',' << d.label;
      out << '\n';
    }
  }
}

inline void write_distribution_file(const std::filesystem::path& path,
                                    const std::vector<LabelledDistribution>& dists) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write " + path.string());
  write_distribution_csv(out, dists);
  if (!out) throw RuntimeError("write failed for " + path.string());
}

inline std::vector<LabelledDistribution> parse_distribution_table(
    const CsvTable& table, const std::string& source) {
  const bool grouped = table.header.size() == 3;
  if (grouped) {
    require_header(table, {"likelihood", "mass", "group"}, source);
  } else {
    require_header(table, {"likelihood", "mass"}, source);
  }
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> cols;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = source + ":" + std::to_string(table.line_numbers[r]);
    const std::string label = grouped ? table.rows[r][2] : std::string();
    if (!cols.contains(label)) order.push_back(label);
    auto& [support, mass] = cols[label];
    support.push_back(parse_double(table.rows[r][0], where));
    mass.push_back(parse_double(table.rows[r][1], where));
  }
  if (order.empty()) throw ValidationError(source + ": no rows");
  std::vector<LabelledDistribution> out;
  for (const auto& label : order) {
    auto& [support, mass] = cols[label];
    try {
      out.push_back({label, LikelihoodDistribution(std::move(support), std::move(mass))});
    } catch (const ValidationError& e) {
      throw ValidationError(source + (label.empty() ? "" : " group '" + label + "'") +
                            ": " + e.what());
    }
  }
  return out;
}

inline std::vector<LabelledDistribution> read_distribution_file(
    const std::filesystem::path& path) {
  return parse_distribution_table(read_csv_file(path), path.string());
}

}  // namespace stratburden::io
