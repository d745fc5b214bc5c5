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

#include "ldpq/bayess.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace ldpq {
namespace {

double BacObjective(double x, double tau, double alpha) {
  return BinaryEntropy((1 - x) * (tau - alpha) + x * (tau + alpha)) -
         (1 - x) * BinaryEntropy(tau - alpha) - x * BinaryEntropy(tau + alpha);
}

absl::Status CheckCoins(std::span<const int64_t> coins, int64_t domain_size) {
  if (coins.size() < 2) {
    return absl::InvalidArgumentError("need at least two coins");
  }
  for (size_t k = 0; k < coins.size(); ++k) {
    if (coins[k] < 1 || coins[k] > domain_size ||
        (k > 0 && coins[k] <= coins[k - 1])) {
      return absl::InvalidArgumentError(
          "coins must be strictly increasing indices in [1, B]");
    }
  }
  return absl::OkStatus();
}

}  // namespace

double BinaryEntropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

absl::StatusOr<BacParams> BacQuantileAndCapacity(double tau, double alpha) {
  if (!(tau > 0.0 && tau < 1.0)) {
    return absl::InvalidArgumentError("tau must lie in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha <= 0.5 * std::min(tau, 1 - tau))) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha = ", alpha, " outside (0, min(tau, 1 - tau) / 2]"));
  }
  // The objective is concave in x, so its slope is decreasing; bisect on the
  // sign of the slope. Comparing objective values directly stalls near
  // sqrt(machine epsilon) because the maximum is flat.
  const double jump = BinaryEntropy(tau + alpha) - BinaryEntropy(tau - alpha);
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = (lo + hi) / 2;
    const double y = (1 - mid) * (tau - alpha) + mid * (tau + alpha);
    if (2 * alpha * std::log2((1 - y) / y) > jump) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  BacParams p;
  p.tau = tau;
  p.alpha = alpha;
  p.q_star = (lo + hi) / 2;
  p.capacity = BacObjective(p.q_star, tau, alpha);
  const double shift = (2 * p.q_star - 1) * alpha;
  p.d00 = (1 - tau - alpha) / (1 - tau - shift);
  p.d01 = (1 - tau + alpha) / (1 - tau - shift);
  p.d10 = (tau + alpha) / (tau + shift);
  p.d11 = (tau - alpha) / (tau + shift);
  return p;
}

int64_t GetIntervalFromQuantile(const WeightVector& w, double q) {
  return w.FindPrefix(q * w.Total());
}

int64_t RoundIntervalToCoin(int64_t i, const WeightVector& w, double q) {
  const double inside = q * w.Total() - w.Prefix(i - 1);
  return inside / w.Weight(i) <= q ? i : i + 1;
}

void BayesUpdate(WeightVector& w, int64_t j, bool y, const BacParams& params) {
  const double left = y ? params.d10 : params.d00;
  const double right = y ? params.d11 : params.d01;
  const double split = params.q_star * w.Total();
  const double before = w.Prefix(j - 1);
  const double through = before + w.Weight(j);
  w.MultiplyRange(1, j - 1, left);
  w.MultiplyRange(j + 1, w.size(), right);
  w.Set(j, left * (split - before) + right * (through - split));
}

absl::StatusOr<std::vector<int64_t>> BayesLearn(CoinOracle& oracle,
                                                std::span<const int64_t> coins,
                                                const BacParams& params,
                                                int64_t rounds,
                                                WeightVector& w) {
  if (absl::Status s = CheckCoins(coins, oracle.domain_size()); !s.ok()) {
    return s;
  }
  if (w.size() != static_cast<int64_t>(coins.size()) - 1) {
    return absl::InvalidArgumentError("one weight per interval expected");
  }
  std::vector<int64_t> visits;
  visits.reserve(std::max<int64_t>(rounds, 0));
  for (int64_t round = 0; round < rounds; ++round) {
    const int64_t j = GetIntervalFromQuantile(w, params.q_star);
    const int64_t c = RoundIntervalToCoin(j, w, params.q_star);
    visits.push_back(j);
    absl::StatusOr<bool> y = oracle.Flip(coins[c - 1]);
    if (!y.ok()) return y.status();
    BayesUpdate(w, j, *y, params);
  }
  return visits;
}

absl::StatusOr<std::vector<int64_t>> BayesLearn(CoinOracle& oracle,
                                                std::span<const int64_t> coins,
                                                const BacParams& params,
                                                int64_t rounds,
                                                WeightKind kind) {
  if (coins.size() < 2) {
    return absl::InvalidArgumentError("need at least two coins");
  }
  std::unique_ptr<WeightVector> w =
      MakeUniformWeights(static_cast<int64_t>(coins.size()) - 1, kind);
  return BayesLearn(oracle, coins, params, rounds, *w);
}

std::vector<int64_t> GammaQuantiles(std::vector<int64_t> visits,
                                    double gamma) {
  std::vector<int64_t> kept;
  if (visits.empty()) return kept;
  std::sort(visits.begin(), visits.end());
  const int64_t size = static_cast<int64_t>(visits.size());
  const int64_t step = std::max<int64_t>(
      1, static_cast<int64_t>(
             std::ceil(gamma * static_cast<double>(size) - 1e-9)));
  for (int64_t i = 1; i <= size / step; ++i) {
    kept.push_back(visits[step * i - 1]);
  }
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

absl::StatusOr<std::vector<int64_t>> ReductionToGamma(
    CoinOracle& oracle, std::span<const int64_t> coins,
    const BacParams& params, int64_t rounds, double gamma, WeightKind kind) {
  absl::StatusOr<std::vector<int64_t>> visits =
      BayesLearn(oracle, coins, params, rounds, kind);
  if (!visits.ok()) return visits.status();
  std::vector<int64_t> reduced = GammaQuantiles(*std::move(visits), gamma);
  for (int64_t& interval : reduced) interval = coins[interval - 1];
  return reduced;
}

absl::StatusOr<BayessPlan> PlanBayess(int64_t n, int64_t domain_size) {
  if (domain_size < 2) {
    return absl::InvalidArgumentError("domain size must be at least 2");
  }
  const double log_b = std::log(static_cast<double>(domain_size));
  const double log_log_b = std::max(0.0, std::log(log_b));
  const double denom = log_b + log_log_b + 1;
  const double users = static_cast<double>(n);
  BayessPlan plan;
  plan.first_rounds = static_cast<int64_t>(std::floor(users * log_b / denom));
  plan.second_rounds =
      static_cast<int64_t>(std::floor(users * log_log_b / denom));
  plan.search_users = n - plan.first_rounds - plan.second_rounds;
  plan.alpha_tilde = std::min(0.25, 0.6 * std::sqrt(log_b / users));
  plan.first_gamma = std::min(1.0, 1.0 / (log_b * log_b));
  if (plan.first_rounds < 1 || plan.search_users < 1) {
    return ProtocolInfeasibleError(
        absl::StrCat(n, " users leave an empty budget split for B = ",
                     domain_size));
  }
  return plan;
}

absl::StatusOr<CoinResult> DpBayess(CoinOracle& oracle,
                                    const BayessOptions& options) {
  const int64_t start = oracle.consumed();
  const int64_t domain = oracle.domain_size();
  absl::StatusOr<BayessPlan> plan = PlanBayess(oracle.remaining(), domain);
  if (!plan.ok()) return plan.status();
  absl::StatusOr<BacParams> params =
      BacQuantileAndCapacity(0.5, plan->alpha_tilde);
  if (!params.ok()) return params.status();

  std::vector<int64_t> coins(domain);
  std::iota(coins.begin(), coins.end(), int64_t{1});
  absl::StatusOr<std::vector<int64_t>> candidates =
      ReductionToGamma(oracle, coins, *params, plan->first_rounds,
                       plan->first_gamma, options.weights);
  if (!candidates.ok()) return candidates.status();

  int64_t search_users = plan->search_users;
  std::vector<int64_t> stage_coins = std::move(coins);
  if (static_cast<int64_t>(candidates->size()) > kFinalCandidates) {
    std::vector<int64_t> padded = *candidates;
    padded.push_back(1);
    padded.push_back(domain);
    std::sort(padded.begin(), padded.end());
    padded.erase(std::unique(padded.begin(), padded.end()), padded.end());
    candidates =
        ReductionToGamma(oracle, padded, *params, plan->second_rounds,
                         1.0 / static_cast<double>(kFinalCandidates),
                         options.weights);
    if (!candidates.ok()) return candidates.status();
    stage_coins = std::move(padded);
  } else {
    search_users += plan->second_rounds;
  }
  if (candidates->empty()) {
    return ProtocolInfeasibleError("no candidate coins survived reduction");
  }

  // Both ends of every kept interval.
  std::vector<int64_t> probe = *candidates;
  for (int64_t c : *candidates) {
    auto it = std::upper_bound(stage_coins.begin(), stage_coins.end(), c);
    if (it != stage_coins.end()) probe.push_back(*it);
  }
  std::sort(probe.begin(), probe.end());
  probe.erase(std::unique(probe.begin(), probe.end()), probe.end());

  // Equal shares, leftovers to the first coins.
  const int64_t count = static_cast<int64_t>(probe.size());
  const int64_t base = search_users / count;
  const int64_t extra = search_users % count;
  std::vector<double> estimate;
  std::vector<int64_t> probed;
  for (int64_t k = 0; k < count; ++k) {
    const int64_t share = base + (k < extra ? 1 : 0);
    if (share == 0) continue;
    int64_t ones = 0;
    for (int64_t t = 0; t < share; ++t) {
      absl::StatusOr<bool> bit = oracle.Flip(probe[k]);
      if (!bit.ok()) return bit.status();
      ones += *bit ? 1 : 0;
    }
    estimate.push_back(oracle.channel().Unbias(static_cast<double>(ones) /
                                               static_cast<double>(share)));
    probed.push_back(probe[k]);
  }
  const int64_t used = oracle.consumed() - start;

  // The CDF is monotone; pooling violators also ties plateau coins, so the
  // first coin of a plateau wins below.
  estimate = IsotonicFit(estimate);
  size_t best = 0;
  for (size_t k = 1; k < estimate.size(); ++k) {
    if (std::abs(estimate[k] - 0.5) < std::abs(estimate[best] - 0.5)) {
      best = k;
    }
  }
  const int64_t index =
      estimate[best] < 0.5 ? probed[best] : probed[best] - 1;
  return CoinResult{std::min(index, domain - 1), used, used};
}

absl::StatusOr<CoinResult> DpBayess(const Dataset& dataset,
                                    const RRChannel& channel, Rng& rng,
                                    const BayessOptions& options) {
  EmpiricalOracle oracle(dataset, channel, rng);
  return DpBayess(oracle, options);
}

}  // namespace ldpq
