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

#include "ldpq/shuffle.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "ldpq/coin_oracle.h"
#include "ldpq/naive_nbs.h"

namespace ldpq {
namespace {

bool Feasible(double eps, double log_term, int64_t batch) {
  const double b = static_cast<double>(batch);
  return eps * eps * b / (80 * log_term) > 1.0 &&
         eps > 16 * std::sqrt(log_term / b);
}

}  // namespace

absl::StatusOr<AmplifiedEps> AmplifiedLocalEps(double eps, double delta,
                                               int64_t batch_size) {
  if (!(eps > 0)) return absl::InvalidArgumentError("eps must be positive");
  if (!(delta > 0 && delta <= 1)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1]");
  }
  if (batch_size < 1) {
    return absl::InvalidArgumentError("batch size must be positive");
  }
  const double log_term = std::log(4 / delta);
  AmplifiedEps out;
  out.eps_local = std::log(eps * eps * static_cast<double>(batch_size) /
                           (80 * log_term));
  out.feasible = Feasible(eps, log_term, batch_size);
  // The square-root condition is the binding one: n' > 256 ln(4/delta)/eps^2.
  int64_t m = static_cast<int64_t>(std::floor(256 * log_term / (eps * eps))) + 1;
  while (m > 1 && Feasible(eps, log_term, m - 1)) --m;
  while (!Feasible(eps, log_term, m)) ++m;
  out.min_feasible_batch = m;
  return out;
}

absl::StatusOr<int64_t> MinShuffleUsers(double eps, double delta,
                                        int64_t domain_size) {
  if (domain_size < 2) {
    return absl::InvalidArgumentError("domain size must be at least 2");
  }
  absl::StatusOr<AmplifiedEps> amp = AmplifiedLocalEps(eps, delta, 1);
  if (!amp.ok()) return amp.status();
  const int64_t rounds = CeilLog2(domain_size);
  return std::max<int64_t>(rounds, (amp->min_feasible_batch - 1) * rounds);
}

double ShuffleAggregate(std::span<const uint8_t> bits,
                        const RRChannel& channel) {
  int64_t ones = 0;
  for (uint8_t b : bits) ones += b;
  return channel.Unbias(static_cast<double>(ones) /
                        static_cast<double>(bits.size()));
}

absl::StatusOr<CoinResult> ShuffleNbs(const Dataset& dataset, double eps,
                                      double delta, Rng& rng) {
  const int64_t n = dataset.size();
  const int64_t domain = dataset.domain_size();
  absl::StatusOr<BatchPlan> plan = AllocateBatches(n, domain);
  if (!plan.ok()) return plan.status();
  const int64_t batch = n / CeilLog2(domain) + 1;
  absl::StatusOr<AmplifiedEps> amp = AmplifiedLocalEps(eps, delta, batch);
  if (!amp.ok()) return amp.status();
  if (!amp->feasible) {
    return ProtocolInfeasibleError(absl::StrCat(
        "batch of ", batch, " users cannot amplify to eps = ", eps,
        ", delta = ", delta, "; need ", amp->min_feasible_batch));
  }
  absl::StatusOr<RRChannel> channel = RRChannel::Create(amp->eps_local);
  if (!channel.ok()) return channel.status();

  EmpiricalOracle oracle(dataset, *channel, rng);
  std::vector<uint8_t> bits;
  int64_t flips = 0;
  auto estimate = [&](int64_t coin, int64_t step) -> absl::StatusOr<double> {
    bits.clear();
    for (int64_t k = 0; k < plan->batch_sizes[step]; ++k) {
      absl::StatusOr<bool> bit = oracle.Flip(coin);
      if (!bit.ok()) return bit.status();
      bits.push_back(*bit ? 1 : 0);
    }
    flips += static_cast<int64_t>(bits.size());
    ShuffleBatch(bits, rng);
    return ShuffleAggregate(bits, *channel);
  };
  absl::StatusOr<int64_t> index = MonotoneBinarySearch(domain, estimate);
  if (!index.ok()) return index.status();
  return CoinResult{*index, flips, oracle.consumed()};
}

}  // namespace ldpq
