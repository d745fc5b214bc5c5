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
#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace ldpq {
namespace {

Dataset Make(std::vector<int64_t> values, int64_t domain) {
  return *Dataset::Create(std::move(values), domain);
}

TEST(EmpiricalOracleTest, NoiselessPassCountsOnes) {
  const Dataset ds = Make({1, 2, 3, 4, 5, 6, 7, 8}, 8);
  Rng rng(1);
  EmpiricalOracle oracle(ds, RRChannel::Identity(), rng);
  int ones = 0;
  for (int k = 0; k < 8; ++k) ones += *oracle.Flip(4) ? 1 : 0;
  EXPECT_EQ(ones, 4);
  EXPECT_EQ(oracle.remaining(), 0);
  absl::StatusOr<bool> extra = oracle.Flip(4);
  EXPECT_TRUE(IsUsersExhausted(extra.status()));
}

TEST(EmpiricalOracleTest, IdentityChannelMatchesExactAnswers) {
  const Dataset ds = Make({3, 1, 4, 1, 5, 9, 2, 6, 5, 3}, 10);
  Rng a(17);
  Rng b(17);
  EmpiricalOracle noisy(ds, RRChannel::Identity(), a);
  EmpiricalOracle exact(ds, *RRChannel::Create(0.5), b,
                        EmpiricalOracle::Options{.exact_from = 0});
  for (int64_t k = 0; k < ds.size(); ++k) {
    const int64_t j = 1 + (k * 7) % 10;
    ASSERT_EQ(*noisy.Flip(j), *exact.Flip(j));
  }
  EXPECT_TRUE(std::equal(noisy.consumed_users().begin(),
                         noisy.consumed_users().end(),
                         exact.consumed_users().begin()));
}

TEST(EmpiricalOracleTest, FirstFlipMeanMatchesChannel) {
  const Dataset ds = Make({1, 2, 2, 5, 7, 7, 8, 9, 10, 10}, 10);
  const RRChannel ch = *RRChannel::Create(1.0);
  const int64_t j = 5;
  const double q = 4.0 / 10.0;
  const double e = std::exp(1.0);
  const double expected = q * e / (1 + e) + (1 - q) / (1 + e);
  Rng rng(23);
  const int reps = 100000;
  int64_t ones = 0;
  for (int r = 0; r < reps; ++r) {
    EmpiricalOracle oracle(ds, ch, rng);
    ones += *oracle.Flip(j) ? 1 : 0;
  }
  const double sigma = std::sqrt(expected * (1 - expected) / reps);
  EXPECT_NEAR(static_cast<double>(ones) / reps, expected, 4 * sigma);
}

TEST(EmpiricalOracleTest, NeverReusesAUser) {
  std::vector<int64_t> values(500);
  for (size_t k = 0; k < values.size(); ++k) values[k] = 1 + k % 37;
  const Dataset ds = Make(values, 40);
  Rng rng(3);
  EmpiricalOracle oracle(ds, *RRChannel::Create(1.0), rng);
  for (int k = 0; k < 300; ++k) ASSERT_TRUE(oracle.Flip(1 + k % 40).ok());
  const auto used = oracle.consumed_users();
  EXPECT_EQ(used.size(), 300u);
  std::set<int64_t> distinct(used.begin(), used.end());
  EXPECT_EQ(distinct.size(), 300u);
  for (int64_t u : used) {
    EXPECT_GE(u, 0);
    EXPECT_LT(u, ds.size());
  }
  EXPECT_EQ(oracle.remaining(), 200);
}

TEST(EmpiricalOracleTest, RejectsCoinOutsideDomain) {
  const Dataset ds = Make({1, 2}, 4);
  Rng rng(1);
  EmpiricalOracle oracle(ds, RRChannel::Identity(), rng);
  EXPECT_FALSE(oracle.Flip(0).ok());
  EXPECT_FALSE(oracle.Flip(5).ok());
  EXPECT_EQ(oracle.consumed(), 0);
}

TEST(StatisticalOracleTest, EstimatesAreMonotone) {
  std::vector<double> cdf = {0.0, 0.05, 0.2, 0.2, 0.45, 0.6, 0.8, 0.95, 1.0};
  Rng rng(8);
  const int64_t flips = 10000;
  StatisticalOracle oracle = *StatisticalOracle::Create(
      cdf, RRChannel::Identity(), flips * 8, rng);
  std::vector<double> est(9, 0.0);
  for (int64_t j = 1; j <= 8; ++j) {
    int64_t ones = 0;
    for (int64_t k = 0; k < flips; ++k) ones += *oracle.Flip(j) ? 1 : 0;
    est[j] = static_cast<double>(ones) / flips;
  }
  for (int64_t j = 2; j <= 8; ++j) {
    const double p = cdf[j];
    const double slack = 4 * std::sqrt(std::max(p * (1 - p), 1e-12) / flips);
    EXPECT_GE(est[j] + slack, est[j - 1]) << j;
  }
  EXPECT_TRUE(IsUsersExhausted(oracle.Flip(1).status()));
}

TEST(StatisticalOracleTest, RejectsBadCdf) {
  Rng rng(1);
  EXPECT_FALSE(StatisticalOracle::Create({0.0, 0.7, 0.5, 1.0},
                                         RRChannel::Identity(), 10, rng)
                   .ok());
  EXPECT_FALSE(StatisticalOracle::Create({0.1, 0.5, 1.0},
                                         RRChannel::Identity(), 10, rng)
                   .ok());
}

TEST(AdversarialOracleTest, EnforcesTheDeviationBand) {
  const std::vector<double> base = {0.0, 0.3, 0.6, 1.0};
  Rng rng(2);
  AdversarialOracle honest = *AdversarialOracle::Create(
      base, 1.0, 0.05,
      [&](int64_t round, int64_t coin) {
        return base[coin] + (round % 2 == 0 ? 0.05 : -0.05);
      },
      100, rng);
  for (int k = 0; k < 50; ++k) ASSERT_TRUE(honest.Flip(1 + k % 2).ok());

  AdversarialOracle cheat = *AdversarialOracle::Create(
      base, 1.0, 0.05,
      [&](int64_t, int64_t coin) { return base[coin] + 0.2; }, 100, rng);
  absl::StatusOr<bool> flip = cheat.Flip(1);
  EXPECT_EQ(flip.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(cheat.consumed(), 0);
}

TEST(DriftTest, TailBoundValues) {
  EXPECT_DOUBLE_EQ(DriftTailBound(100, 0.0), 1.0);
  EXPECT_NEAR(DriftTailBound(800, 0.2), 2 * std::exp(-16.0), 1e-20);
  EXPECT_LT(DriftTailBound(900, 0.2), DriftTailBound(800, 0.2));
  EXPECT_LT(DriftTailBound(800, 0.3), DriftTailBound(800, 0.2));
}

TEST(DriftTest, ConstantDatasetNeverDrifts) {
  const Dataset ds = Make(std::vector<int64_t>(50, 3), 6);
  Rng rng(1);
  for (double d : MeasureMaxDrift(ds, 20, rng)) EXPECT_EQ(d, 0.0);
}

TEST(DriftTest, TwoUsersDriftByHalf) {
  const Dataset ds = Make({1, 5}, 5);
  Rng rng(1);
  for (double d : MeasureMaxDrift(ds, 10, rng)) EXPECT_DOUBLE_EQ(d, 0.5);
}

TEST(DriftTest, EmpiricalTailBelowUnionBound) {
  std::vector<int64_t> values(1000);
  for (size_t k = 0; k < values.size(); ++k) values[k] = 1 + k % 16;
  const Dataset ds = Make(values, 16);
  Rng rng(12);
  const std::vector<double> drifts = MeasureMaxDrift(ds, 2000, rng);
  for (double t : {0.05, 0.1, 0.15}) {
    const double tail =
        static_cast<double>(std::count_if(drifts.begin(), drifts.end(),
                                          [&](double d) { return d >= t; })) /
        static_cast<double>(drifts.size());
    EXPECT_LE(tail, std::min(1.0, 16 * DriftTailBound(500, t))) << t;
  }
}

}  // namespace
}  // namespace ldpq
