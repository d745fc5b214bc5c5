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

#include "ldpq/core.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"

namespace ldpq {

Dataset::Dataset(std::vector<int64_t> values, int64_t domain_size)
    : values_(std::move(values)), sorted_(values_), domain_size_(domain_size) {
  std::sort(sorted_.begin(), sorted_.end());
}

absl::StatusOr<Dataset> Dataset::Create(std::vector<int64_t> values,
                                        int64_t domain_size) {
  if (domain_size < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain size must be at least 2, got ", domain_size));
  }
  if (values.empty()) {
    return absl::InvalidArgumentError("dataset must hold at least one value");
  }
  for (int64_t v : values) {
    if (v < 1 || v > domain_size) {
      return absl::OutOfRangeError(absl::StrCat(
          "value ", v, " outside domain [1, ", domain_size, "]"));
    }
  }
  return Dataset(std::move(values), domain_size);
}

int64_t Dataset::CountAtMost(int64_t i) const {
  return std::upper_bound(sorted_.begin(), sorted_.end(), i) - sorted_.begin();
}

absl::Status QuantileSpec::Validate() const {
  if (q <= 0 || q >= 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantile must lie in (0, 1), got ", q.ToString()));
  }
  if (alpha <= 0 || alpha >= Rational(1, 4)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1/4), got ", alpha.ToString()));
  }
  if (!(eps > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive, got ", eps));
  }
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1), got ", delta));
  }
  return absl::OkStatus();
}

absl::string_view ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kBayess:
      return "bayess";
    case Protocol::kNaive:
      return "naive";
    case Protocol::kHierarchical:
      return "hier";
    case Protocol::kShuffleNaive:
      return "shuffle-naive";
  }
  return "unknown";
}

absl::StatusOr<Protocol> ParseProtocol(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "bayess") return Protocol::kBayess;
  if (lower == "naive") return Protocol::kNaive;
  if (lower == "hier" || lower == "hierarchical") {
    return Protocol::kHierarchical;
  }
  if (lower == "shuffle-naive" || lower == "shuffle_naive") {
    return Protocol::kShuffleNaive;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown protocol '", name,
                                                 "'"));
}

absl::StatusOr<Rational> EmpiricalCdf(const Dataset& dataset, int64_t i) {
  if (i < 0 || i > dataset.domain_size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "CDF index ", i, " outside [0, ", dataset.domain_size(), "]"));
  }
  return Rational(dataset.CountAtMost(i), dataset.size());
}

absl::StatusOr<bool> IsGoodCoin(const Dataset& dataset, int64_t m,
                                const Rational& tau, const Rational& alpha) {
  if (m < 0 || m > dataset.domain_size() - 1) {
    return absl::OutOfRangeError(absl::StrCat(
        "coin ", m, " outside [0, ", dataset.domain_size() - 1, "]"));
  }
  const Rational lower(dataset.CountAtMost(m), dataset.size());
  const Rational upper(dataset.CountAtMost(m + 1), dataset.size());
  return lower < tau + alpha && upper > tau - alpha;
}

Rational RoundQuantileToGrid(const Rational& q, int64_t n) {
  // floor(q * n + 1/2) computed exactly.
  const __int128 scaled = static_cast<__int128>(q.num()) * n * 2 + q.den();
  const __int128 twice_den = static_cast<__int128>(q.den()) * 2;
  __int128 k = scaled / twice_den;
  if (scaled % twice_den != 0 && scaled < 0) --k;
  return Rational(static_cast<int64_t>(k), n);
}

absl::StatusOr<Dataset> PadForQuantile(const Dataset& dataset,
                                       const Rational& q) {
  if (q <= 0 || q >= 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantile must lie in (0, 1), got ", q.ToString()));
  }
  const int64_t n = dataset.size();
  const Rational high = q * n;
  const Rational low = (Rational(1) - q) * n;
  if (high.den() != 1 || low.den() != 1) {
    return absl::FailedPreconditionError(absl::StrCat(
        "pad counts q*n = ", high.ToString(), " and (1-q)*n = ",
        low.ToString(), " must be integers; round q to a multiple of 1/n"));
  }
  std::vector<int64_t> padded(dataset.values().begin(),
                              dataset.values().end());
  padded.reserve(2 * n);
  padded.insert(padded.end(), low.num(), 1);
  padded.insert(padded.end(), high.num(), dataset.domain_size());
  return Dataset::Create(std::move(padded), dataset.domain_size());
}

absl::StatusOr<Dataset> Bucketize(std::span<const double> raw,
                                  std::span<const double> cuts) {
  for (size_t i = 1; i < cuts.size(); ++i) {
    if (!(cuts[i - 1] < cuts[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("cuts must be strictly increasing; cut ", i, " = ",
                       cuts[i], " follows ", cuts[i - 1]));
    }
  }
  std::vector<int64_t> buckets;
  buckets.reserve(raw.size());
  for (double v : raw) {
    // Number of cuts <= v, plus one.
    buckets.push_back(
        std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin() + 1);
  }
  return Dataset::Create(std::move(buckets),
                         static_cast<int64_t>(cuts.size()) + 1);
}

int64_t ReferenceQuantileIndex(const Dataset& dataset, const Rational& tau) {
  // Largest m with CountAtMost(m) <= tau * n; the CDF is a step function so a
  // binary search over [0, B] suffices.
  int64_t lo = 0;
  int64_t hi = dataset.domain_size();
  while (lo < hi) {
    const int64_t mid = lo + (hi - lo + 1) / 2;
    if (Rational(dataset.CountAtMost(mid), dataset.size()) <= tau) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

absl::StatusOr<TrialEvaluation> EvaluateTrial(const Dataset& dataset,
                                              int64_t m_tilde,
                                              const Rational& tau,
                                              const Rational& alpha_test) {
  if (m_tilde < 0 || m_tilde > dataset.domain_size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "returned index ", m_tilde, " outside [0, ", dataset.domain_size(),
        "]"));
  }
  TrialEvaluation out;
  out.m_true = ReferenceQuantileIndex(dataset, tau);
  const int64_t n = dataset.size();
  out.abs_error = Abs(Rational(dataset.CountAtMost(m_tilde), n) -
                      Rational(dataset.CountAtMost(out.m_true), n));
  const Rational lower(dataset.CountAtMost(m_tilde), n);
  const Rational upper(dataset.CountAtMost(m_tilde + 1), n);
  out.success = lower < tau + alpha_test && upper > tau - alpha_test;
  return out;
}

double SuccessStd(double success_rate, int64_t trials) {
  return std::sqrt(success_rate * (1.0 - success_rate) /
                   static_cast<double>(trials));
}

int64_t CeilLog2(int64_t x) {
  int64_t bits = 0;
  while ((int64_t{1} << bits) < x) ++bits;
  return bits;
}

absl::Status ProtocolInfeasibleError(absl::string_view detail) {
  return absl::FailedPreconditionError(
      absl::StrCat("protocol infeasible: ", detail));
}

bool IsProtocolInfeasible(const absl::Status& status) {
  return absl::IsFailedPrecondition(status) &&
         absl::StartsWith(status.message(), "protocol infeasible");
}

std::vector<double> IsotonicFit(std::span<const double> y) {
  std::vector<double> sums;
  std::vector<int64_t> sizes;
  for (double v : y) {
    sums.push_back(v);
    sizes.push_back(1);
    while (sums.size() > 1) {
      const size_t b = sums.size() - 1;
      if (sums[b - 1] * static_cast<double>(sizes[b]) <=
          sums[b] * static_cast<double>(sizes[b - 1])) {
        break;
      }
      sums[b - 1] += sums[b];
      sizes[b - 1] += sizes[b];
      sums.pop_back();
      sizes.pop_back();
    }
  }
  std::vector<double> fit;
  fit.reserve(y.size());
  for (size_t b = 0; b < sums.size(); ++b) {
    fit.insert(fit.end(), sizes[b], sums[b] / static_cast<double>(sizes[b]));
  }
  return fit;
}

}  // namespace ldpq
