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

#ifndef LDPQ_BAYESS_H_
#define LDPQ_BAYESS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpq/coin_oracle.h"
#include "ldpq/core.h"
#include "ldpq/randomized_response.h"
#include "ldpq/weights.h"

namespace ldpq {

// Binary asymmetric channel with crossover probabilities tau -/+ alpha.
// q_star is the capacity-achieving input distribution and doubles as the
// posterior split point; d_xy are the multiplicative Bayes weights applied
// after observing flip x, to the left (y = 0) or right (y = 1) of the split.
struct BacParams {
  double tau = 0.5;
  double alpha = 0.0;
  double q_star = 0.5;
  double capacity = 0.0;  // bits
  double d00 = 1.0;
  double d01 = 1.0;
  double d10 = 1.0;
  double d11 = 1.0;
};

// Binary entropy in bits; H(0) = H(1) = 0.
double BinaryEntropy(double p);

// Requires 0 < tau < 1 and 0 < alpha <= min(tau, 1 - tau) / 2.
absl::StatusOr<BacParams> BacQuantileAndCapacity(double tau, double alpha);

// Smallest i with W(i) >= q * Total(); the last interval if none.
int64_t GetIntervalFromQuantile(const WeightVector& w, double q);

// i if (q - W(i - 1)) / w(i) <= q, else i + 1. Weights are read relative to
// Total(), so an unnormalized vector behaves like its normalization.
int64_t RoundIntervalToCoin(int64_t i, const WeightVector& w, double q);

// Posterior update after flip y at interval j: entries left of j scale by
// d_{y,0}, entries right of j by d_{y,1}, and w(j) becomes
// d_{y,0} (q - W(j - 1)) + d_{y,1} (W(j) - q), with q = q_star * Total().
// The total is preserved for every j. When j is the interval selected for q
// the new w(j) is positive; for other j it may not be.
void BayesUpdate(WeightVector& w, int64_t j, bool y, const BacParams& params);

// Runs `rounds` rounds over the coins `coins` (strictly increasing, at least
// two). Interval k lies between coins[k - 1] and coins[k]. Each round picks
// an interval, flips the rounded coin once through `oracle`, and updates
// `w`, which must have coins.size() - 1 entries. Returns the visited
// intervals in visit order.
absl::StatusOr<std::vector<int64_t>> BayesLearn(CoinOracle& oracle,
                                                std::span<const int64_t> coins,
                                                const BacParams& params,
                                                int64_t rounds,
                                                WeightVector& w);
absl::StatusOr<std::vector<int64_t>> BayesLearn(
    CoinOracle& oracle, std::span<const int64_t> coins,
    const BacParams& params, int64_t rounds,
    WeightKind kind = WeightKind::kTree);

// Sorts the visited intervals and keeps every ceil(gamma |L|)-th one,
// floor(|L| / ceil(gamma |L|)) picks in all, sorted and deduplicated.
std::vector<int64_t> GammaQuantiles(std::vector<int64_t> visits,
                                    double gamma);

// BayesLearn followed by GammaQuantiles; returns the left coin of each kept
// interval.
absl::StatusOr<std::vector<int64_t>> ReductionToGamma(
    CoinOracle& oracle, std::span<const int64_t> coins,
    const BacParams& params, int64_t rounds, double gamma,
    WeightKind kind = WeightKind::kTree);

struct BayessPlan {
  int64_t first_rounds = 0;   // M_B1
  int64_t second_rounds = 0;  // M_B2
  int64_t search_users = 0;   // M_S
  double alpha_tilde = 0.0;
  double first_gamma = 1.0;
};

// M_B1 : M_B2 : M_S = ln B : ln ln B : 1 (floors, remainder to M_S),
// alpha_tilde = min(1/4, 0.6 sqrt(ln B / n)), first_gamma = min(1, 1/ln^2 B).
// ln ln B is taken as 0 when B < e.
absl::StatusOr<BayessPlan> PlanBayess(int64_t n, int64_t domain_size);

// Largest candidate set handed to the final search.
inline constexpr int64_t kFinalCandidates = 13;

struct BayessOptions {
  WeightKind weights = WeightKind::kTree;
};

// Bayesian screening search for the median over every remaining user of
// `oracle`. Two rounds of BayesLearn shrink the coin set to at most
// kFinalCandidates intervals. Both end coins of each kept interval are then
// estimated from equal shares of the leftover users, the estimates are made
// monotone by an isotonic fit, and the coin closest to 1/2 decides the
// answer: c if its fitted value is below 1/2, c - 1 otherwise.
absl::StatusOr<CoinResult> DpBayess(CoinOracle& oracle,
                                    const BayessOptions& options = {});

// Convenience wrapper over an EmpiricalOracle on `dataset`.
absl::StatusOr<CoinResult> DpBayess(const Dataset& dataset,
                                    const RRChannel& channel, Rng& rng,
                                    const BayessOptions& options = {});

}  // namespace ldpq

#endif  // LDPQ_BAYESS_H_
