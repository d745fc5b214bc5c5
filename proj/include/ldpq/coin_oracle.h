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

#ifndef LDPQ_COIN_ORACLE_H_
#define LDPQ_COIN_ORACLE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldpq/core.h"
#include "ldpq/randomized_response.h"

namespace ldpq {

// A source of one-shot coin flips over indices 1..B. Coin j comes up heads
// with probability (close to) Pr[x <= j]; every flip spends one unit of
// budget, i.e. one user. Search protocols only ever see this interface, so
// they cannot tell an empirical population from an i.i.d. source.
class CoinOracle {
 public:
  virtual ~CoinOracle() = default;

  // Returns a ResourceExhausted status once the budget is spent.
  virtual absl::StatusOr<bool> Flip(int64_t j) = 0;

  virtual int64_t remaining() const = 0;
  virtual int64_t consumed() const = 0;
  virtual int64_t domain_size() const = 0;

  // The channel applied to every flip; protocols use it to unbias means.
  virtual const RRChannel& channel() const = 0;
};

absl::Status UsersExhaustedError(int64_t budget);
bool IsUsersExhausted(const absl::Status& status);

// Users of a fixed dataset queried in a uniformly random order, each at most
// once. The order is drawn by a Fisher-Yates shuffle that is advanced lazily
// one position per flip, so the permutation is fixed by the rng state at
// construction even when only a prefix of users is consumed.
class EmpiricalOracle final : public CoinOracle {
 public:
  struct Options {
    // Users at dataset positions >= exact_from answer without noise. The
    // default answers everyone through the channel.
    int64_t exact_from = -1;
  };

  EmpiricalOracle(const Dataset& dataset, RRChannel channel, Rng& rng);
  EmpiricalOracle(const Dataset& dataset, RRChannel channel, Rng& rng,
                  Options options);

  absl::StatusOr<bool> Flip(int64_t j) override;
  int64_t remaining() const override { return dataset_->size() - cursor_; }
  int64_t consumed() const override { return cursor_; }
  int64_t domain_size() const override { return dataset_->domain_size(); }
  const RRChannel& channel() const override { return channel_; }

  // Dataset positions of the users queried so far, in query order.
  std::span<const int64_t> consumed_users() const {
    return std::span<const int64_t>(order_).first(cursor_);
  }

 private:
  const Dataset* dataset_;
  RRChannel channel_;
  Rng* rng_;
  int64_t exact_from_;
  std::vector<int64_t> order_;
  int64_t cursor_ = 0;
};

// I.i.d. users drawn from a distribution over [B] given by its CDF
// (cdf[j] = Pr[x <= j] for j = 0..B, cdf[0] = 0, cdf[B] = 1).
class StatisticalOracle final : public CoinOracle {
 public:
  static absl::StatusOr<StatisticalOracle> Create(std::vector<double> cdf,
                                                  RRChannel channel,
                                                  int64_t budget, Rng& rng);

  absl::StatusOr<bool> Flip(int64_t j) override;
  int64_t remaining() const override { return budget_ - used_; }
  int64_t consumed() const override { return used_; }
  int64_t domain_size() const override {
    return static_cast<int64_t>(cdf_.size()) - 1;
  }
  const RRChannel& channel() const override { return channel_; }

 private:
  StatisticalOracle(std::vector<double> cdf, RRChannel channel, int64_t budget,
                    Rng& rng);

  std::vector<double> cdf_;
  RRChannel channel_;
  int64_t budget_;
  int64_t used_ = 0;
  Rng* rng_;
};

// Test double for the adversarial search model: whenever coin j is flipped
// at round t the adversary substitutes a bias schedule(t, j) that must stay
// within c * alpha of the base probability p_j.
class AdversarialOracle final : public CoinOracle {
 public:
  using Schedule = std::function<double(int64_t round, int64_t coin)>;

  // `base` holds p_0..p_B, nondecreasing, with p_0 = 0 and p_B = 1.
  static absl::StatusOr<AdversarialOracle> Create(std::vector<double> base,
                                                  double c, double alpha,
                                                  Schedule schedule,
                                                  int64_t budget, Rng& rng);

  // Fails with FailedPrecondition if the schedule leaves the allowed band.
  absl::StatusOr<bool> Flip(int64_t j) override;
  int64_t remaining() const override { return budget_ - used_; }
  int64_t consumed() const override { return used_; }
  int64_t domain_size() const override {
    return static_cast<int64_t>(base_.size()) - 1;
  }
  const RRChannel& channel() const override { return channel_; }
  double max_deviation() const { return c_ * alpha_; }

 private:
  AdversarialOracle(std::vector<double> base, double c, double alpha,
                    Schedule schedule, int64_t budget, Rng& rng);

  std::vector<double> base_;
  double c_;
  double alpha_;
  Schedule schedule_;
  RRChannel channel_ = RRChannel::Identity();
  int64_t budget_;
  int64_t used_ = 0;
  Rng* rng_;
};

// min(1, 2 exp(-t^2 n / 2)): tail bound on the largest deviation of the
// suffix CDF at one index while the first n of 2n users are removed in
// random order.
double DriftTailBound(int64_t n, double t);

// For each trial, draws a fresh permutation of the users and returns
// max over j in [1, B] and 0 <= t <= n/2 of |p_j^t - p_j^0|, where p_j^t is
// the CDF at j of the users left after removing the first t. An odd-sized
// dataset is made even by duplicating its last element.
std::vector<double> MeasureMaxDrift(const Dataset& dataset, int64_t trials,
                                    Rng& rng);

}  // namespace ldpq

#endif  // LDPQ_COIN_ORACLE_H_
