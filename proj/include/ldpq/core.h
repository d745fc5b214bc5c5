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

#ifndef LDPQ_CORE_H_
#define LDPQ_CORE_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldpq/rational.h"

namespace ldpq {

// Every simulated party draws from a 64-bit Mersenne twister seeded from the
// trial seed; distributions come from <random>.
using Rng = std::mt19937_64;

// An ordered multiset of user values in [1, B]. The CDF is answered from a
// sorted copy, so a Dataset is immutable and safe to share across threads.
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(std::vector<int64_t> values,
                                        int64_t domain_size);

  int64_t size() const { return static_cast<int64_t>(values_.size()); }
  int64_t domain_size() const { return domain_size_; }
  std::span<const int64_t> values() const { return values_; }
  int64_t operator[](int64_t i) const { return values_[i]; }

  // |{j : x_j <= i}| for any integer i (clamped outside [0, B]).
  int64_t CountAtMost(int64_t i) const;

 private:
  Dataset(std::vector<int64_t> values, int64_t domain_size);

  std::vector<int64_t> values_;
  std::vector<int64_t> sorted_;
  int64_t domain_size_ = 0;
};

// Target quantile, accuracy and privacy budget of one estimation task.
struct QuantileSpec {
  Rational q = Rational(1, 2);
  Rational alpha = Rational(1, 20);
  double eps = 1.0;
  double delta = 0.0;

  absl::Status Validate() const;
};

// Output of a protocol run. `index` lies in [0, B]; index m claims that the
// crossing of the target quantile lies between coins m and m + 1.
struct CoinResult {
  int64_t index = 0;
  int64_t flips_used = 0;
  int64_t users_consumed = 0;
};

enum class Protocol { kBayess, kNaive, kHierarchical, kShuffleNaive };

absl::string_view ProtocolName(Protocol protocol);
absl::StatusOr<Protocol> ParseProtocol(absl::string_view name);

// One row of the per-trial CSV.
struct TrialRecord {
  Protocol protocol = Protocol::kBayess;
  uint64_t seed = 0;
  int64_t trial = 0;
  int64_t n = 0;
  int64_t domain_size = 0;
  double eps = 0.0;
  double delta = 0.0;
  Rational alpha_test = Rational(1, 25);
  int64_t m_tilde = -1;
  Rational abs_error = 0;
  bool success = false;
  int64_t users_consumed = 0;
  std::string reason;
};

// F_X(i) as an exact fraction; F_X(0) = 0 and F_X(B) = 1.
absl::StatusOr<Rational> EmpiricalCdf(const Dataset& dataset, int64_t i);

// True iff [F(m), F(m+1)] meets the open interval (tau - alpha, tau + alpha),
// evaluated as F(m) < tau + alpha && F(m+1) > tau - alpha.
absl::StatusOr<bool> IsGoodCoin(const Dataset& dataset, int64_t m,
                                const Rational& tau, const Rational& alpha);

// Rounds q to the nearest multiple of 1/n (halves round up). The induced
// quantile shift is at most 1/(2n).
Rational RoundQuantileToGrid(const Rational& q, int64_t n);

// Appends (1-q)n copies of 1 and qn copies of B, so that for y in [1, B-1]
// the padded CDF is (1-q)/2 + F(y)/2 and the median of the result is the
// q-quantile of the input. Both pad counts must be integral.
absl::StatusOr<Dataset> PadForQuantile(const Dataset& dataset,
                                       const Rational& q);

// Maps each raw value v to the 1-based bucket i with y_{i-1} <= v < y_i,
// taking y_0 = -inf and y_B = +inf. Cuts must be strictly increasing.
absl::StatusOr<Dataset> Bucketize(std::span<const double> raw,
                                  std::span<const double> cuts);

struct TrialEvaluation {
  int64_t m_true = 0;
  Rational abs_error = 0;
  bool success = false;
};

// max{m in [0, B] : F(m) <= tau}.
int64_t ReferenceQuantileIndex(const Dataset& dataset, const Rational& tau);

// abs_error = |F(m_tilde) - F(m_true)| with m_true = ReferenceQuantileIndex;
// success = IsGoodCoin(m_tilde, tau, alpha_test). m_tilde = B (the trivial
// answer for extreme quantiles) is scored with F(B + 1) taken as 1.
absl::StatusOr<TrialEvaluation> EvaluateTrial(const Dataset& dataset,
                                              int64_t m_tilde,
                                              const Rational& tau,
                                              const Rational& alpha_test);

// Standard deviation of a Bernoulli sample average.
double SuccessStd(double success_rate, int64_t trials);

// Pool-adjacent-violators fit: the nondecreasing sequence closest to `y` in
// squared error.
std::vector<double> IsotonicFit(std::span<const double> y);

// ceil(log2(x)) for x >= 1.
int64_t CeilLog2(int64_t x);

// A protocol cannot run with the given parameters (too few users, budget
// split degenerates, amplification precondition fails). Harnesses record
// this as a failed trial rather than aborting.
absl::Status ProtocolInfeasibleError(absl::string_view detail);
bool IsProtocolInfeasible(const absl::Status& status);

}  // namespace ldpq

#endif  // LDPQ_CORE_H_
