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

#ifndef LDPQ_RANDOMIZED_RESPONSE_H_
#define LDPQ_RANDOMIZED_RESPONSE_H_

#include <cstdint>
#include <limits>

#include "absl/status/statusor.h"
#include "ldpq/core.h"

namespace ldpq {

// Binary randomized response: a bit is reported truthfully with probability
// e^eps / (e^eps + 1) and flipped otherwise, which is eps-LDP. An infinite
// eps gives the identity channel used for noiseless runs.
class RRChannel {
 public:
  static absl::StatusOr<RRChannel> Create(double eps);
  static RRChannel Identity() {
    return RRChannel(std::numeric_limits<double>::infinity());
  }

  double eps() const { return eps_; }
  double retain_prob() const { return retain_prob_; }
  double flip_prob() const { return flip_prob_; }
  bool is_identity() const { return flip_prob_ == 0.0; }

  // Reports `bit` through the channel. Consumes exactly one uniform draw.
  bool Flip(bool bit, Rng& rng) const;

  // Inverts the channel's bias: (p - flip) / (retain - flip), which equals
  // (p - 1/(e^eps+1)) (e^eps+1)/(e^eps-1). Not clamped to [0, 1].
  double Unbias(double p_hat) const {
    return (p_hat - flip_prob_) / (retain_prob_ - flip_prob_);
  }

  // Pr[output = 1 | input = bit].
  double OutputOneProb(bool bit) const {
    return bit ? retain_prob_ : flip_prob_;
  }

 private:
  explicit RRChannel(double eps);

  double eps_;
  double retain_prob_;
  double flip_prob_;
};

bool RRFlip(bool bit, const RRChannel& channel, Rng& rng);

// Unbiased estimate of the pre-noise mean from the mean of RR outputs.
// eps must be positive.
absl::StatusOr<double> RRUnbias(double p_hat, double eps);

// Users that suffice to learn one i.i.d. coin of mean p through eps-RR to
// within alpha with failure probability beta (Bernstein bound):
//   ceil[(2p(1-p)/a^2 + 2e^eps/(a^2 (e^eps-1)^2)
//         + 2(e^eps+1)/(3a(e^eps-1))) ln(1/beta)].
absl::StatusOr<int64_t> StatCoinSampleBound(double p, double alpha,
                                            double beta, double eps);

// Same bound for learning the sample mean of a fixed population: the
// sampling-variance term drops out.
absl::StatusOr<int64_t> EmpCoinSampleBound(double alpha, double beta,
                                           double eps);

}  // namespace ldpq

#endif  // LDPQ_RANDOMIZED_RESPONSE_H_
