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

#include "ldpq/coin_oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"

namespace ldpq {
namespace {

constexpr absl::string_view kExhaustedMarker = "users exhausted";

absl::Status CheckCoin(int64_t j, int64_t domain_size) {
  if (j < 1 || j > domain_size) {
    return absl::OutOfRangeError(
        absl::StrCat("coin ", j, " outside [1, ", domain_size, "]"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status UsersExhaustedError(int64_t budget) {
  return absl::ResourceExhaustedError(
      absl::StrCat(kExhaustedMarker, ": all ", budget, " users queried"));
}

bool IsUsersExhausted(const absl::Status& status) {
  return absl::IsResourceExhausted(status) &&
         absl::StartsWith(status.message(), kExhaustedMarker);
}

EmpiricalOracle::EmpiricalOracle(const Dataset& dataset, RRChannel channel,
                                 Rng& rng)
    : EmpiricalOracle(dataset, channel, rng, Options{}) {}

EmpiricalOracle::EmpiricalOracle(const Dataset& dataset, RRChannel channel,
                                 Rng& rng, Options options)
    : dataset_(&dataset),
      channel_(channel),
      rng_(&rng),
      exact_from_(options.exact_from < 0 ? dataset.size()
                                         : options.exact_from),
      order_(dataset.size()) {
  std::iota(order_.begin(), order_.end(), int64_t{0});
}

absl::StatusOr<bool> EmpiricalOracle::Flip(int64_t j) {
  if (absl::Status s = CheckCoin(j, domain_size()); !s.ok()) return s;
  const int64_t n = dataset_->size();
  if (cursor_ >= n) return UsersExhaustedError(n);
  // One Fisher-Yates step: fix position cursor_ to a uniform unused user.
  const int64_t pick =
      std::uniform_int_distribution<int64_t>(cursor_, n - 1)(*rng_);
  std::swap(order_[cursor_], order_[pick]);
  const int64_t user = order_[cursor_++];
  const bool bit = (*dataset_)[user] <= j;
  if (user >= exact_from_) {
    // Burn the draw the channel would have used so both paths stay aligned.
    std::uniform_real_distribution<double>(0.0, 1.0)(*rng_);
    return bit;
  }
  return channel_.Flip(bit, *rng_);
}

StatisticalOracle::StatisticalOracle(std::vector<double> cdf,
                                     RRChannel channel, int64_t budget,
                                     Rng& rng)
    : cdf_(std::move(cdf)), channel_(channel), budget_(budget), rng_(&rng) {}

absl::StatusOr<StatisticalOracle> StatisticalOracle::Create(
    std::vector<double> cdf, RRChannel channel, int64_t budget, Rng& rng) {
  if (cdf.size() < 3) {
    return absl::InvalidArgumentError("CDF must cover a domain of size >= 2");
  }
  if (cdf.front() != 0.0 || cdf.back() != 1.0) {
    return absl::InvalidArgumentError("CDF must start at 0 and end at 1");
  }
  for (size_t j = 1; j < cdf.size(); ++j) {
    if (cdf[j] < cdf[j - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("CDF decreases at index ", j));
    }
  }
  if (budget < 0) {
    return absl::InvalidArgumentError("budget must be nonnegative");
  }
  return StatisticalOracle(std::move(cdf), channel, budget, rng);
}

absl::StatusOr<bool> StatisticalOracle::Flip(int64_t j) {
  if (absl::Status s = CheckCoin(j, domain_size()); !s.ok()) return s;
  if (used_ >= budget_) return UsersExhaustedError(budget_);
  ++used_;
  // A fresh user x ~ D answers [x <= j], which is Bernoulli(cdf[j]).
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(*rng_);
  return channel_.Flip(u < cdf_[j], *rng_);
}

AdversarialOracle::AdversarialOracle(std::vector<double> base, double c,
                                     double alpha, Schedule schedule,
                                     int64_t budget, Rng& rng)
    : base_(std::move(base)),
      c_(c),
      alpha_(alpha),
      schedule_(std::move(schedule)),
      budget_(budget),
      rng_(&rng) {}

absl::StatusOr<AdversarialOracle> AdversarialOracle::Create(
    std::vector<double> base, double c, double alpha, Schedule schedule,
    int64_t budget, Rng& rng) {
  if (base.size() < 3 || base.front() != 0.0 || base.back() != 1.0) {
    return absl::InvalidArgumentError(
        "base probabilities must run from p_0 = 0 to p_B = 1, B >= 2");
  }
  for (size_t j = 1; j < base.size(); ++j) {
    if (base[j] < base[j - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("base probabilities decrease at index ", j));
    }
  }
  if (!(c > 0) || !(alpha > 0)) {
    return absl::InvalidArgumentError("c and alpha must be positive");
  }
  if (!schedule) {
    return absl::InvalidArgumentError("schedule must be callable");
  }
  return AdversarialOracle(std::move(base), c, alpha, std::move(schedule),
                           budget, rng);
}

absl::StatusOr<bool> AdversarialOracle::Flip(int64_t j) {
  if (absl::Status s = CheckCoin(j, domain_size()); !s.ok()) return s;
  if (used_ >= budget_) return UsersExhaustedError(budget_);
  const double biased = schedule_(used_, j);
  if (!(std::abs(biased - base_[j]) <= c_ * alpha_ + 1e-12) ||
      biased < 0.0 || biased > 1.0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "adversary chose bias ", biased, " for coin ", j, " at round ", used_,
        "; base is ", base_[j], " and the allowed deviation ", c_ * alpha_));
  }
  ++used_;
  return std::uniform_real_distribution<double>(0.0, 1.0)(*rng_) < biased;
}

double DriftTailBound(int64_t n, double t) {
  return std::min(1.0, 2.0 * std::exp(-t * t * static_cast<double>(n) / 2.0));
}

std::vector<double> MeasureMaxDrift(const Dataset& dataset, int64_t trials,
                                    Rng& rng) {
  std::vector<int64_t> values(dataset.values().begin(),
                              dataset.values().end());
  if (values.size() % 2 == 1) values.push_back(values.back());
  const int64_t n = static_cast<int64_t>(values.size());
  const int64_t domain = dataset.domain_size();

  // count_le[j] = users with x <= j among the full population.
  std::vector<int64_t> initial(domain + 1, 0);
  for (int64_t v : values) ++initial[v];
  std::partial_sum(initial.begin(), initial.end(), initial.begin());

  std::vector<double> result;
  result.reserve(trials);
  std::vector<int64_t> order(n);
  std::vector<int64_t> count_le(domain + 1);
  for (int64_t trial = 0; trial < trials; ++trial) {
    std::iota(order.begin(), order.end(), int64_t{0});
    for (int64_t i = 0; i + 1 < n; ++i) {
      const int64_t k = std::uniform_int_distribution<int64_t>(i, n - 1)(rng);
      std::swap(order[i], order[k]);
    }
    count_le = initial;
    double max_drift = 0.0;
    for (int64_t t = 1; t <= n / 2; ++t) {
      const int64_t removed = values[order[t - 1]];
      for (int64_t j = removed; j <= domain; ++j) --count_le[j];
      const double left = static_cast<double>(n - t);
      for (int64_t j = 1; j <= domain; ++j) {
        const double now = static_cast<double>(count_le[j]) / left;
        const double start =
            static_cast<double>(initial[j]) / static_cast<double>(n);
        max_drift = std::max(max_drift, std::abs(now - start));
      }
    }
    result.push_back(max_drift);
  }
  return result;
}

}  // namespace ldpq
