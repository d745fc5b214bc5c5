// Copyright 2026 The ldpq Authors
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

#ifndef LDPQ_NAIVE_NBS_H_
#define LDPQ_NAIVE_NBS_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpq/coin_oracle.h"
#include "ldpq/core.h"

namespace ldpq {

// Users per search step. Sizes differ by at most one, larger first.
struct BatchPlan {
  std::vector<int64_t> batch_sizes;

  int64_t total() const;
};

// ceil(log2 B) batches of floor(n / ceil(log2 B)) users, with the leftover
// users handed out one each starting from the first batch.
absl::StatusOr<BatchPlan> AllocateBatches(int64_t n, int64_t domain_size);

// Estimates the CDF at `coin` during search step `step` (0-based).
using PivotEstimator =
    std::function<absl::StatusOr<double>(int64_t coin, int64_t step)>;
// Sees the search interval [lo, hi] before every step and once at the end.
using SearchObserver = std::function<void(int64_t lo, int64_t hi)>;

// Binary search for max{m in [0, B-1] : F(m) < 1/2} over a monotone CDF F
// known only through `estimate`. With lo = 0, hi = B - 1 and
// mid = floor((lo + hi) / 2), coin mid + 1 is queried; an estimate >= 1/2
// moves hi to mid, anything else moves lo to mid + 1. Returns lo once
// lo == hi, after at most ceil(log2 B) queries.
absl::StatusOr<int64_t> MonotoneBinarySearch(
    int64_t domain_size, const PivotEstimator& estimate,
    const SearchObserver& observer = nullptr);

// Binary search where each pivot is estimated by the unbiased mean of the
// next plan.batch_sizes[step] flips from `oracle`. The reported index is in
// [0, B - 1].
absl::StatusOr<CoinResult> DpNaiveNbs(CoinOracle& oracle,
                                      const BatchPlan& plan);

}  // namespace ldpq

#endif  // LDPQ_NAIVE_NBS_H_
