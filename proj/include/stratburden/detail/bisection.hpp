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

#include <cmath>

#include "stratburden/error.hpp"

namespace stratburden::detail {

inline constexpr int kMaxBisectionIterations = 200;

struct Bracket {
  double lo;
  double hi;
};

// Shrinks [lo, hi] around the switch point of a monotone predicate with
// pred(lo) != pred(hi). Runs until the endpoints are adjacent doubles (or
// closer than 2^-54 absolute), which is far inside the 1e-9 tolerance the
// callers promise; the returned bracket still satisfies pred(lo) == pred_lo.
template <typename Pred>
Bracket bisect(Pred pred, double lo, double hi) {
  const bool pred_lo = pred(lo);
  for (int it = 0; it < kMaxBisectionIterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi || hi - lo <= 0x1p-54) return {lo, hi};
    if (pred(mid) == pred_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw RuntimeError("bisection did not converge");
}

}  // namespace stratburden::detail
