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

#ifndef LDPQ_SHUFFLE_H_
#define LDPQ_SHUFFLE_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpq/core.h"
#include "ldpq/randomized_response.h"

namespace ldpq {

struct AmplifiedEps {
  // ln(eps^2 n' / (80 ln(4 / delta))), reported even when infeasible.
  double eps_local = 0.0;
  // eps_local > 0 and eps > 16 sqrt(ln(4 / delta) / n').
  bool feasible = false;
  // Smallest batch size n' for which both conditions hold.
  int64_t min_feasible_batch = 0;
};

// Local budget that a batch of `batch_size` shuffled eps_local-RR messages
// needs to meet central (eps, delta). Natural logs throughout.
absl::StatusOr<AmplifiedEps> AmplifiedLocalEps(double eps, double delta,
                                               int64_t batch_size);

// Fewest users n for which ShuffleNbs is feasible on a domain of size B,
// i.e. floor(n / ceil(log2 B)) + 1 reaches the minimal feasible batch.
absl::StatusOr<int64_t> MinShuffleUsers(double eps, double delta,
                                        int64_t domain_size);

// Uniformly random reordering by Fisher-Yates.
template <typename T>
void ShuffleBatch(std::vector<T>& messages, Rng& rng) {
  for (int64_t i = static_cast<int64_t>(messages.size()) - 1; i > 0; --i) {
    const int64_t k = std::uniform_int_distribution<int64_t>(0, i)(rng);
    std::swap(messages[i], messages[k]);
  }
}

// The aggregator's view of one round: the unbiased mean of the shuffled
// bits. Depends on the bits only through their sum.
double ShuffleAggregate(std::span<const uint8_t> bits,
                        const RRChannel& channel);

// Binary search with ceil(log2 B) rounds. Round k sends the next batch of
// users (sizes as in AllocateBatches) through eps_L-RR, where eps_L is
// AmplifiedLocalEps at n' = floor(n / ceil(log2 B)) + 1, shuffles their
// bits and branches on ShuffleAggregate. Infeasible amplification is a
// ProtocolInfeasible error.
absl::StatusOr<CoinResult> ShuffleNbs(const Dataset& dataset, double eps,
                                      double delta, Rng& rng);

}  // namespace ldpq

#endif  // LDPQ_SHUFFLE_H_
