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

#include "ldpq/randomized_response.h"

#include <cmath>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace ldpq {
namespace {

absl::Status CheckBoundArgs(double alpha, double beta, double eps) {
  if (!(alpha > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be positive, got ", alpha));
  }
  if (!(beta > 0 && beta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in (0, 1), got ", beta));
  }
  if (!(eps > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive, got ", eps));
  }
  return absl::OkStatus();
}

// Noise part of the bound, shared by both settings.
double ChannelTerm(double alpha, double eps) {
  const double e = std::exp(eps);
  return 2.0 * e / (alpha * alpha * (e - 1.0) * (e - 1.0)) +
         2.0 * (e + 1.0) / (3.0 * alpha * (e - 1.0));
}

}  // namespace

RRChannel::RRChannel(double eps) : eps_(eps) {
  if (std::isinf(eps)) {
    retain_prob_ = 1.0;
    flip_prob_ = 0.0;
  } else {
    // 1 / (1 + e^-eps) stays accurate for large eps.
    retain_prob_ = 1.0 / (1.0 + std::exp(-eps));
    flip_prob_ = 1.0 / (1.0 + std::exp(eps));
  }
}

absl::StatusOr<RRChannel> RRChannel::Create(double eps) {
  if (!(eps > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive, got ", eps));
  }
  return RRChannel(eps);
}

bool RRChannel::Flip(bool bit, Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < retain_prob_ ? bit : !bit;
}

bool RRFlip(bool bit, const RRChannel& channel, Rng& rng) {
  return channel.Flip(bit, rng);
}

absl::StatusOr<double> RRUnbias(double p_hat, double eps) {
  absl::StatusOr<RRChannel> channel = RRChannel::Create(eps);
  if (!channel.ok()) return channel.status();
  return channel->Unbias(p_hat);
}

absl::StatusOr<int64_t> StatCoinSampleBound(double p, double alpha,
                                            double beta, double eps) {
  if (!(p >= 0 && p <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p must lie in [0, 1], got ", p));
  }
  if (absl::Status s = CheckBoundArgs(alpha, beta, eps); !s.ok()) return s;
  const double n = (2.0 * p * (1.0 - p) / (alpha * alpha) +
                    ChannelTerm(alpha, eps)) *
                   std::log(1.0 / beta);
  return static_cast<int64_t>(std::ceil(n));
}

absl::StatusOr<int64_t> EmpCoinSampleBound(double alpha, double beta,
                                           double eps) {
  if (absl::Status s = CheckBoundArgs(alpha, beta, eps); !s.ok()) return s;
  return static_cast<int64_t>(
      std::ceil(ChannelTerm(alpha, eps) * std::log(1.0 / beta)));
}

}  // namespace ldpq
