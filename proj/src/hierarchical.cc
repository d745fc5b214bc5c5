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

#include "ldpq/hierarchical.h"

#include <algorithm>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"

namespace ldpq {

IntervalTree::IntervalTree(int64_t domain_size, int64_t branching,
                           std::vector<int64_t> widths)
    : domain_size_(domain_size),
      branching_(branching),
      depth_(static_cast<int64_t>(widths.size()) - 1),
      widths_(std::move(widths)) {}

absl::StatusOr<IntervalTree> IntervalTree::Create(int64_t domain_size,
                                                  int64_t branching) {
  if (domain_size < 2) {
    return absl::InvalidArgumentError("domain size must be at least 2");
  }
  if (branching < 2) {
    return absl::InvalidArgumentError("branching factor must be at least 2");
  }
  // Leaf width first, then grow until one node spans the domain.
  std::vector<int64_t> reversed = {1};
  while (reversed.back() < domain_size) {
    reversed.push_back(reversed.back() * branching);
  }
  // reversed.back() >= B is the trivial root, which is not a level.
  reversed.pop_back();
  std::vector<int64_t> widths = {0};
  widths.insert(widths.end(), reversed.rbegin(), reversed.rend());
  return IntervalTree(domain_size, branching, std::move(widths));
}

int64_t IntervalTree::NodeCount(int64_t level) const {
  return (domain_size_ + widths_[level] - 1) / widths_[level];
}

int64_t IntervalTree::NodeOf(int64_t x, int64_t level) const {
  return (x - 1) / widths_[level] + 1;
}

std::pair<int64_t, int64_t> IntervalTree::NodeRange(int64_t level,
                                                    int64_t node) const {
  const int64_t w = widths_[level];
  return {(node - 1) * w + 1, std::min(node * w, domain_size_)};
}

absl::StatusOr<std::vector<TreeNode>> IntervalTree::Decompose(
    int64_t lo, int64_t hi, const std::vector<bool>* available) const {
  if (lo < 1 || hi > domain_size_ || lo > hi) {
    return absl::OutOfRangeError(
        absl::StrCat("range [", lo, ", ", hi, "] outside [1, ", domain_size_,
                     "]"));
  }
  std::vector<TreeNode> cover;
  int64_t pos = lo;
  while (pos <= hi) {
    bool placed = false;
    for (int64_t level = 1; level <= depth_; ++level) {
      if (available != nullptr && !(*available)[level]) continue;
      const int64_t w = widths_[level];
      if ((pos - 1) % w != 0) continue;
      const int64_t end = std::min(pos + w - 1, domain_size_);
      if (end > hi) continue;
      cover.emplace_back(level, NodeOf(pos, level));
      pos = end + 1;
      placed = true;
      break;
    }
    if (!placed) {
      return absl::FailedPreconditionError(
          absl::StrCat("no available level covers position ", pos));
    }
  }
  return cover;
}

absl::StatusOr<RRChannel> UnaryBitChannel(double eps) {
  if (!(eps > 0)) return absl::InvalidArgumentError("eps must be positive");
  return RRChannel::Create(eps / 2);
}

LevelReport EncodeReport(const IntervalTree& tree, int64_t x, int64_t level,
                         const RRChannel& bit_channel, Rng& rng) {
  LevelReport report;
  report.level = level;
  const int64_t hot = tree.NodeOf(x, level);
  report.bits.resize(tree.NodeCount(level));
  for (int64_t k = 1; k <= tree.NodeCount(level); ++k) {
    report.bits[k - 1] = bit_channel.Flip(k == hot, rng) ? 1 : 0;
  }
  return report;
}

HierEstimate::HierEstimate(IntervalTree tree, int64_t n,
                           std::vector<std::vector<double>> counts,
                           std::vector<bool> available)
    : tree_(std::move(tree)),
      n_(n),
      counts_(std::move(counts)),
      available_(std::move(available)) {}

absl::StatusOr<double> HierEstimate::RangeQuery(int64_t lo, int64_t hi) const {
  absl::StatusOr<std::vector<TreeNode>> cover =
      tree_.Decompose(lo, hi, &available_);
  if (!cover.ok()) return cover.status();
  double total = 0.0;
  for (const auto& [level, node] : *cover) total += NodeCount(level, node);
  return total / static_cast<double>(n_);
}

absl::StatusOr<std::vector<double>> HierEstimate::Cdf() const {
  const int64_t depth = tree_.depth();
  const int64_t domain = tree_.domain_size();
  if (!available_[depth]) {
    return absl::FailedPreconditionError("leaf level has no reports");
  }
  std::vector<std::vector<double>> prefix(depth + 1);
  for (int64_t level = 1; level <= depth; ++level) {
    if (!available_[level]) continue;
    prefix[level].assign(counts_[level].size() + 1, 0.0);
    for (size_t k = 0; k < counts_[level].size(); ++k) {
      prefix[level][k + 1] = prefix[level][k] + counts_[level][k];
    }
  }
  std::vector<double> cdf(domain + 1, 0.0);
  for (int64_t i = 1; i <= domain; ++i) {
    double total = 0.0;
    int64_t pos = 1;
    for (int64_t level = 1; level <= depth && pos <= i; ++level) {
      if (!available_[level]) continue;
      const int64_t w = tree_.NodeWidth(level);
      int64_t last = i / w;
      if (i == domain && domain % w != 0) ++last;
      const int64_t first = (pos - 1) / w + 1;
      if (last < first) continue;
      total += prefix[level][last] - prefix[level][first - 1];
      pos = tree_.NodeRange(level, last).second + 1;
    }
    cdf[i] = total / static_cast<double>(n_);
  }
  return cdf;
}

absl::StatusOr<HierEstimate> Aggregate(const IntervalTree& tree,
                                       std::span<const LevelReport> reports,
                                       const RRChannel& bit_channel,
                                       int64_t n) {
  if (reports.empty()) return absl::InvalidArgumentError("no reports");
  const int64_t depth = tree.depth();
  std::vector<int64_t> per_level(depth + 1, 0);
  std::vector<std::vector<double>> ones(depth + 1);
  for (int64_t level = 1; level <= depth; ++level) {
    ones[level].assign(tree.NodeCount(level), 0.0);
  }
  for (const LevelReport& report : reports) {
    if (report.level < 1 || report.level > depth ||
        static_cast<int64_t>(report.bits.size()) !=
            tree.NodeCount(report.level)) {
      return absl::InvalidArgumentError("report does not match the tree");
    }
    ++per_level[report.level];
    for (size_t k = 0; k < report.bits.size(); ++k) {
      ones[report.level][k] += report.bits[k];
    }
  }
  std::vector<bool> available(depth + 1, false);
  for (int64_t level = 1; level <= depth; ++level) {
    available[level] = per_level[level] > 0;
    if (!available[level]) continue;
    for (double& v : ones[level]) {
      v = bit_channel.Unbias(v / static_cast<double>(per_level[level])) *
          static_cast<double>(n);
    }
  }
  return HierEstimate(tree, n, std::move(ones), std::move(available));
}

absl::StatusOr<HierEstimate> CollectHierEstimate(const Dataset& dataset,
                                                 const RRChannel& bit_channel,
                                                 Rng& rng,
                                                 const HierOptions& options) {
  absl::StatusOr<IntervalTree> tree =
      IntervalTree::Create(dataset.domain_size(), options.branching);
  if (!tree.ok()) return tree.status();
  const int64_t depth = tree->depth();
  const int64_t n = dataset.size();

  std::vector<int64_t> levels;
  if (!options.all_levels) {
    levels.resize(n);
    std::uniform_int_distribution<int64_t> pick(1, depth);
    for (int64_t& level : levels) level = pick(rng);
  }

  if (options.per_user_reports) {
    std::vector<LevelReport> reports;
    for (int64_t u = 0; u < n; ++u) {
      if (options.all_levels) {
        for (int64_t level = 1; level <= depth; ++level) {
          reports.push_back(
              EncodeReport(*tree, dataset[u], level, bit_channel, rng));
        }
      } else {
        reports.push_back(
            EncodeReport(*tree, dataset[u], levels[u], bit_channel, rng));
      }
    }
    return Aggregate(*tree, reports, bit_channel, n);
  }

  // Same distribution as encoding every report: a node's noisy one-count is
  // Binomial(hot, retain) + Binomial(reports - hot, flip).
  std::vector<int64_t> per_level(depth + 1, options.all_levels ? n : 0);
  std::vector<std::vector<double>> counts(depth + 1);
  std::vector<std::vector<int64_t>> hot(depth + 1);
  for (int64_t level = 1; level <= depth; ++level) {
    hot[level].assign(tree->NodeCount(level), 0);
  }
  for (int64_t u = 0; u < n; ++u) {
    if (options.all_levels) {
      for (int64_t level = 1; level <= depth; ++level) {
        ++hot[level][tree->NodeOf(dataset[u], level) - 1];
      }
    } else {
      ++per_level[levels[u]];
      ++hot[levels[u]][tree->NodeOf(dataset[u], levels[u]) - 1];
    }
  }
  std::vector<bool> available(depth + 1, false);
  for (int64_t level = 1; level <= depth; ++level) {
    available[level] = per_level[level] > 0;
    counts[level].assign(hot[level].size(), 0.0);
    if (!available[level]) continue;
    const double reports = static_cast<double>(per_level[level]);
    for (size_t k = 0; k < hot[level].size(); ++k) {
      int64_t ones = hot[level][k];
      if (!bit_channel.is_identity()) {
        const int64_t cold = per_level[level] - ones;
        ones = (ones > 0 ? std::binomial_distribution<int64_t>(
                               ones, bit_channel.retain_prob())(rng)
                         : 0) +
               std::binomial_distribution<int64_t>(
                   cold, bit_channel.flip_prob())(rng);
      }
      counts[level][k] =
          bit_channel.Unbias(static_cast<double>(ones) / reports) *
          static_cast<double>(n);
    }
  }
  return HierEstimate(*std::move(tree), n, std::move(counts),
                      std::move(available));
}

absl::StatusOr<CoinResult> HierMedian(const Dataset& dataset,
                                      const RRChannel& bit_channel, Rng& rng,
                                      const HierOptions& options) {
  absl::StatusOr<IntervalTree> tree =
      IntervalTree::Create(dataset.domain_size(), options.branching);
  if (!tree.ok()) return tree.status();
  if (!options.all_levels && dataset.size() < tree->depth()) {
    return ProtocolInfeasibleError(absl::StrCat(
        dataset.size(), " users for a tree of depth ", tree->depth()));
  }
  absl::StatusOr<HierEstimate> estimate =
      CollectHierEstimate(dataset, bit_channel, rng, options);
  if (!estimate.ok()) return estimate.status();
  absl::StatusOr<std::vector<double>> cdf = estimate->Cdf();
  if (!cdf.ok()) return cdf.status();
  const int64_t domain = dataset.domain_size();
  const std::vector<double> fit = IsotonicFit(
      std::span<const double>(*cdf).subspan(1, domain - 1));
  int64_t index = 0;
  for (int64_t i = 1; i <= domain - 1; ++i) {
    if (fit[i - 1] < 0.5) index = i;
  }
  const int64_t reports =
      options.all_levels ? dataset.size() * tree->depth() : dataset.size();
  return CoinResult{index, reports, dataset.size()};
}

}  // namespace ldpq
