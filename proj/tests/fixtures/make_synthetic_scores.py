# Copyright 2026 The stratburden Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic two-group credit-score fixture.

Scores run 300..850 in steps of 5. Repayment probability is logistic in the
score. Each group's score mass is a discretized normal with a shared width, the
second group shifted down, so the likelihood ratio is monotone and the
second group's positives are strictly dominated.
"""

import math

SCORES = list(range(300, 851, 5))
GROUPS = {"white": 700.0, "black": 600.0}
WIDTH = 80.0


def repay(s):
    return 1.0 / (1.0 + math.exp(-(s - 620.0) / 40.0))


def main():
    with open("synthetic_perf.csv", "w") as f:
        f.write("score,repay_prob\n")
        for s in SCORES:
            f.write(f"{s},{repay(s)!r}\n")
    with open("synthetic_cdf.csv", "w") as f:
        f.write("score,group,cdf\n")
        for group, mean in GROUPS.items():
            w = [math.exp(-0.5 * ((s - mean) / WIDTH) ** 2) for s in SCORES]
            total = sum(w)
            acc = 0.0
            for s, x in zip(SCORES, w):
                acc += x
                value = 1.0 if s == SCORES[-1] else acc / total
                f.write(f"{s},{group},{value!r}\n")


if __name__ == "__main__":
    main()
