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

#ifndef LDPQ_HIERARCHICAL_H_
#define LDPQ_HIERARCHICAL_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpq/core.h"
#include "ldpq/randomized_response.h"

namespace ldpq {

// A node is (level, index), both 1-based.
using TreeNode = std::pair<int64_t, int64_t>;

// b-adic decomposition of [1, B]. Level l in 1..L, L = ceil(log_b B), splits
// the domain into nodes of width b^(L - l); the last node of a level is cut
// short when B is not a power of b. Level L holds the single points.
class IntervalTree {
 public:
  static absl::StatusOr<IntervalTree> Create(int64_t domain_size,
                                             int64_t branching = 4);

  int64_t domain_size() const { return domain_size_; }
  int64_t branching() const { return branching_; }
  int64_t depth() const { return depth_; }
  int64_t NodeWidth(int64_t level) const { return widths_[level]; }
  int64_t NodeCount(int64_t level) const;
  int64_t NodeOf(int64_t x, int64_t level) const;
  std::pair<int64_t, int64_t> NodeRange(int64_t level, int64_t node) const;

  // Canonical cover of [lo, hi] by maximal aligned nodes, skipping levels
  // whose `available` entry (indexed by level, size depth() + 1) is false.
  // Fails if the leaf level is needed but unavailable.
  absl::StatusOr<std::vector<TreeNode>> Decompose(
      int64_t lo, int64_t hi, const std::vector<bool>* available = nullptr)
      const;

 private:
  IntervalTree(int64_t domain_size, int64_t branching,
               std::vector<int64_t> widths);

  int64_t domain_size_;
  int64_t branching_;
  int64_t depth_;
  std::vector<int64_t> widths_;  // widths_[l] for l in 1..L
};

// One user's one-hot node indicator at a level, every bit passed through
// `bit_channel` independently.
struct LevelReport {
  int64_t level = 0;
  std::vector<uint8_t> bits;
};

// The per-bit channel for an eps-LDP unary report: two inputs differ in
// exactly two bits, so each bit gets eps / 2.
absl::StatusOr<RRChannel> UnaryBitChannel(double eps);

LevelReport EncodeReport(const IntervalTree& tree, int64_t x, int64_t level,
                         const RRChannel& bit_channel, Rng& rng);

// Unbiased node counts. counts[l][k - 1] estimates the number of the n users
// in node (l, k); levels without reports are unavailable.
class HierEstimate {
 public:
  HierEstimate(IntervalTree tree, int64_t n,
               std::vector<std::vector<double>> counts,
               std::vector<bool> available);

  const IntervalTree& tree() const { return tree_; }
  bool available(int64_t level) const { return available_[level]; }
  double NodeCount(int64_t level, int64_t node) const {
    return counts_[level][node - 1];
  }

  // Estimated fraction of users in [lo, hi].
  absl::StatusOr<double> RangeQuery(int64_t lo, int64_t hi) const;

  // F(0..B) from the canonical covers of the prefixes [1, i].
  absl::StatusOr<std::vector<double>> Cdf() const;

 private:
  IntervalTree tree_;
  int64_t n_;
  std::vector<std::vector<double>> counts_;
  std::vector<bool> available_;
};

// Combines reports into node estimates for a population of n users.
absl::StatusOr<HierEstimate> Aggregate(const IntervalTree& tree,
                                       std::span<const LevelReport> reports,
                                       const RRChannel& bit_channel,
                                       int64_t n);

struct HierOptions {
  int64_t branching = 4;
  // Encode every report bit by bit instead of drawing per-node binomials.
  bool per_user_reports = false;
  // Every user reports at every level (noiseless accuracy checks only).
  bool all_levels = false;
};

// Each user reports at one uniformly chosen level. The answer is
// max{i in [0, B - 1] : F(i) < 1/2} on the isotonic fit of the estimated
// CDF, i.e. the coin closest to 1/2 shifted down when it lies at or above
// 1/2.
absl::StatusOr<CoinResult> HierMedian(const Dataset& dataset,
                                      const RRChannel& bit_channel, Rng& rng,
                                      const HierOptions& options = {});

// Runs the collection step alone and returns the node estimates.
absl::StatusOr<HierEstimate> CollectHierEstimate(const Dataset& dataset,
                                                 const RRChannel& bit_channel,
                                                 Rng& rng,
                                                 const HierOptions& options);

}  // namespace ldpq

#endif  // LDPQ_HIERARCHICAL_H_
