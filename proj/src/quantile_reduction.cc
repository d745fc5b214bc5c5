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

#include "ldpq/quantile_reduction.h"

#include <algorithm>
#include <utility>

namespace ldpq {

MedianSolver OracleMedianSolver(OracleSolver solve, RRChannel channel,
                                bool virtual_noiseless) {
  return [solve = std::move(solve), channel, virtual_noiseless](
             const PaddedPopulation& population,
             Rng& rng) -> absl::StatusOr<CoinResult> {
    EmpiricalOracle::Options options;
    if (virtual_noiseless) {
      options.exact_from = population.data.size() - population.num_virtual;
    }
    EmpiricalOracle oracle(population.data, channel, rng, options);
    return solve(oracle);
  };
}

absl::StatusOr<CoinResult> QuantileViaMedian(const MedianSolver& solver,
                                             const Dataset& dataset,
                                             const QuantileSpec& spec,
                                             Rng& rng) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (spec.q <= spec.alpha) return CoinResult{1, 0, 0};
  if (spec.q >= Rational(1) - spec.alpha) {
    return CoinResult{dataset.domain_size(), 0, 0};
  }
  const int64_t n = dataset.size();
  if (n < 2) return ProtocolInfeasibleError("padding needs at least 2 users");
  Rational q = RoundQuantileToGrid(spec.q, n);
  q = std::clamp(q, Rational(1, n), Rational(n - 1, n));
  absl::StatusOr<Dataset> padded = PadForQuantile(dataset, q);
  if (!padded.ok()) return padded.status();
  return solver(PaddedPopulation{*std::move(padded), n}, rng);
}

}  // namespace ldpq
