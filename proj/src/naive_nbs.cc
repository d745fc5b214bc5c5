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

#include "ldpq/naive_nbs.h"

#include <numeric>

#include "absl/strings/str_cat.h"

namespace ldpq {

int64_t BatchPlan::total() const {
  return std::accumulate(batch_sizes.begin(), batch_sizes.end(), int64_t{0});
}

absl::StatusOr<BatchPlan> AllocateBatches(int64_t n, int64_t domain_size) {
  if (domain_size < 2) {
    return absl::InvalidArgumentError("domain size must be at least 2");
  }
  const int64_t rounds = CeilLog2(domain_size);
  if (n < rounds) {
    return ProtocolInfeasibleError(absl::StrCat(
        n, " users cannot fill ", rounds, " binary-search batches"));
  }
  const int64_t base = n / rounds;
  const int64_t extra = n - base * rounds;
  BatchPlan plan;
  plan.batch_sizes.assign(rounds, base);
  for (int64_t k = 0; k < extra; ++k) ++plan.batch_sizes[k];
  return plan;
}

absl::StatusOr<int64_t> MonotoneBinarySearch(int64_t domain_size,
                                             const PivotEstimator& estimate,
                                             const SearchObserver& observer) {
  int64_t lo = 0;
  int64_t hi = domain_size - 1;
  for (int64_t step = 0; lo < hi; ++step) {
    if (observer) observer(lo, hi);
    const int64_t mid = lo + (hi - lo) / 2;
    absl::StatusOr<double> cdf = estimate(mid + 1, step);
    if (!cdf.ok()) return cdf.status();
    if (*cdf >= 0.5) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (observer) observer(lo, hi);
  return lo;
}

absl::StatusOr<CoinResult> DpNaiveNbs(CoinOracle& oracle,
                                      const BatchPlan& plan) {
  const int64_t start = oracle.consumed();
  int64_t flips = 0;
  auto estimate = [&](int64_t coin, int64_t step) -> absl::StatusOr<double> {
    if (step >= static_cast<int64_t>(plan.batch_sizes.size())) {
      return ProtocolInfeasibleError("batch plan shorter than the search");
    }
    const int64_t size = plan.batch_sizes[step];
    if (size <= 0) return ProtocolInfeasibleError("empty batch");
    int64_t ones = 0;
    for (int64_t k = 0; k < size; ++k) {
      absl::StatusOr<bool> bit = oracle.Flip(coin);
      if (!bit.ok()) return bit.status();
      ones += *bit ? 1 : 0;
    }
    flips += size;
    return oracle.channel().Unbias(static_cast<double>(ones) /
                                   static_cast<double>(size));
  };
  absl::StatusOr<int64_t> index =
      MonotoneBinarySearch(oracle.domain_size(), estimate);
  if (!index.ok()) return index.status();
  return CoinResult{*index, flips, oracle.consumed() - start};
}

}  // namespace ldpq
