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

#ifndef LDPQ_QUANTILE_REDUCTION_H_
#define LDPQ_QUANTILE_REDUCTION_H_

#include <cstdint>
#include <functional>

#include "absl/status/statusor.h"
#include "ldpq/coin_oracle.h"
#include "ldpq/core.h"
#include "ldpq/randomized_response.h"

namespace ldpq {

// A padded dataset whose last `num_virtual` users are simulated by the
// analyst rather than held by real parties.
struct PaddedPopulation {
  Dataset data;
  int64_t num_virtual = 0;
};

using MedianSolver = std::function<absl::StatusOr<CoinResult>(
    const PaddedPopulation& population, Rng& rng)>;
using OracleSolver = std::function<absl::StatusOr<CoinResult>(CoinOracle&)>;

// Adapts an oracle-based median protocol: the population is queried through
// an EmpiricalOracle with `channel`. With `virtual_noiseless` the simulated
// users answer exactly instead of through the channel.
MedianSolver OracleMedianSolver(OracleSolver solve, RRChannel channel,
                                bool virtual_noiseless);

// Solves the q-quantile problem with a median solver. q is rounded to the
// nearest multiple of 1/n (kept inside [1/n, 1 - 1/n]), the dataset is padded
// with (1 - q) n copies of 1 and q n copies of B, and the median of the
// padded data is returned; an alpha-good median of the padding is a
// 2 alpha-good q-quantile of the original. q <= alpha answers 1 and
// q >= 1 - alpha answers B without touching any user.
absl::StatusOr<CoinResult> QuantileViaMedian(const MedianSolver& solver,
                                             const Dataset& dataset,
                                             const QuantileSpec& spec,
                                             Rng& rng);

}  // namespace ldpq

#endif  // LDPQ_QUANTILE_REDUCTION_H_
