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

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "stratburden/costs.hpp"
#include "stratburden/distributions.hpp"
#include "stratburden/error.hpp"

namespace stratburden {

struct Group {
  std::string label;
  LikelihoodDistribution dist;
  ValidatedCost cost;
};

// Labelled subpopulations, each with its own likelihood distribution and
// manipulation cost. Insertion order is preserved.
class GroupedPopulation {
 public:
  explicit GroupedPopulation(std::vector<Group> groups)
      : groups_(std::move(groups)) {
    if (groups_.empty()) throw ValidationError("population needs a group");
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (groups_[i].label == groups_[j].label) {
          throw ValidationError("duplicate group label '" + groups_[i].label +
                                "'");
        }
      }
    }
  }

  const std::vector<Group>& groups() const { return groups_; }

  const Group& at(const std::string& label) const {
    auto it = std::find_if(groups_.begin(), groups_.end(),
                           [&](const Group& g) { return g.label == label; });
    if (it == groups_.end()) {
      throw ValidationError("missing group '" + label + "'");
    }
    return *it;
  }

  bool contains(const std::string& label) const {
    return std::any_of(groups_.begin(), groups_.end(),
                       [&](const Group& g) { return g.label == label; });
  }

 private:
  std::vector<Group> groups_;
};

}  // namespace stratburden
