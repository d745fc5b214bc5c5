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

#include "ldpq/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <tuple>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "ldpq/bayess.h"
#include "ldpq/coin_oracle.h"
#include "ldpq/generators.h"
#include "ldpq/hierarchical.h"
#include "ldpq/naive_nbs.h"
#include "ldpq/randomized_response.h"
#include "ldpq/shuffle.h"

namespace ldpq {
namespace {

constexpr uint64_t kDatasetStream = 0x6a09e667f3bcc909ULL;

std::string Num(double x) { return absl::StrFormat("%.10g", x); }

absl::StatusOr<RRChannel> ChannelFor(double eps) {
  if (std::isinf(eps) && eps > 0) return RRChannel::Identity();
  return RRChannel::Create(eps);
}

bool Recordable(const absl::Status& status) {
  return IsProtocolInfeasible(status) || IsUsersExhausted(status);
}

double NearestRank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<int64_t>(
      std::ceil(p * static_cast<double>(sorted.size()) - 1e-9));
  return sorted[std::clamp<int64_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

absl::StatusOr<DatasetSpec> ParseDatasetSpec(absl::string_view text) {
  if (text == "pareto") return DatasetSpec{DatasetKind::kPareto, ""};
  if (text == "uniform-interval" || text == "uniform_interval") {
    return DatasetSpec{DatasetKind::kUniformInterval, ""};
  }
  if (absl::ConsumePrefix(&text, "file:") && !text.empty()) {
    return DatasetSpec{DatasetKind::kFile, std::string(text)};
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown dataset '", text,
      "'; expected pareto, uniform-interval or file:PATH"));
}

std::string DatasetSpecName(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetKind::kPareto:
      return "pareto";
    case DatasetKind::kUniformInterval:
      return "uniform-interval";
    case DatasetKind::kFile:
      return absl::StrCat("file:", spec.path);
  }
  return "";
}

absl::Status ExperimentConfig::Validate() const {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (eps.empty()) return absl::InvalidArgumentError("no eps values given");
  for (double e : eps) {
    if (!(e > 0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("eps must be positive, got ", e));
    }
  }
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  if (!(alpha_test > 0)) {
    return absl::InvalidArgumentError("alpha_test must be positive");
  }
  if (threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  if (dataset.kind != DatasetKind::kFile) {
    if (domain_size < 2) return absl::InvalidArgumentError("B must be >= 2");
    if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  }
  return absl::OkStatus();
}

uint64_t MixSeed(uint64_t x) {
  uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t TrialSeed(uint64_t seed, int64_t trial) {
  return MixSeed(MixSeed(seed) ^ static_cast<uint64_t>(trial));
}

uint64_t DatasetSeed(uint64_t seed) { return MixSeed(seed ^ kDatasetStream); }

absl::StatusOr<Dataset> BuildDataset(const ExperimentConfig& config,
                                     uint64_t seed) {
  switch (config.dataset.kind) {
    case DatasetKind::kPareto:
      return GenPareto(config.n, config.domain_size, seed);
    case DatasetKind::kUniformInterval:
      return GenUniformInterval(config.n, config.domain_size, seed);
    case DatasetKind::kFile:
      return ReadDatasetFile(config.dataset.path);
  }
  return absl::InternalError("unhandled dataset kind");
}

absl::StatusOr<CoinResult> RunProtocol(Protocol protocol,
                                       const Dataset& dataset, double eps,
                                       double delta, Rng& rng) {
  switch (protocol) {
    case Protocol::kBayess: {
      absl::StatusOr<RRChannel> channel = ChannelFor(eps);
      if (!channel.ok()) return channel.status();
      return DpBayess(dataset, *channel, rng);
    }
    case Protocol::kNaive: {
      absl::StatusOr<RRChannel> channel = ChannelFor(eps);
      if (!channel.ok()) return channel.status();
      absl::StatusOr<BatchPlan> plan =
          AllocateBatches(dataset.size(), dataset.domain_size());
      if (!plan.ok()) return plan.status();
      EmpiricalOracle oracle(dataset, *channel, rng);
      return DpNaiveNbs(oracle, *plan);
    }
    case Protocol::kHierarchical: {
      absl::StatusOr<RRChannel> channel =
          std::isinf(eps) ? RRChannel::Identity() : UnaryBitChannel(eps);
      if (!channel.ok()) return channel.status();
      return HierMedian(dataset, *channel, rng);
    }
    case Protocol::kShuffleNaive:
      return ShuffleNbs(dataset, eps, delta, rng);
  }
  return absl::InternalError("unhandled protocol");
}

absl::StatusOr<TrialRecord> RunTrial(const ExperimentConfig& config,
                                     const Dataset& dataset, double eps,
                                     int64_t trial) {
  TrialRecord record;
  record.protocol = config.protocol;
  record.seed = TrialSeed(config.seed, trial);
  record.trial = trial;
  record.n = dataset.size();
  record.domain_size = dataset.domain_size();
  record.eps = eps;
  record.delta = config.delta;
  record.alpha_test = config.alpha_test;

  Rng rng(record.seed);
  absl::StatusOr<CoinResult> result =
      RunProtocol(config.protocol, dataset, eps, config.delta, rng);
  if (!result.ok()) {
    if (!Recordable(result.status())) return result.status();
    record.m_tilde = -1;
    record.abs_error = 1;
    record.success = false;
    record.reason = std::string(result.status().message());
    return record;
  }
  absl::StatusOr<TrialEvaluation> eval = EvaluateTrial(
      dataset, result->index, Rational(1, 2), config.alpha_test);
  if (!eval.ok()) return eval.status();
  record.m_tilde = result->index;
  record.abs_error = eval->abs_error;
  record.success = eval->success;
  record.users_consumed = result->users_consumed;
  return record;
}

std::vector<SummaryRow> Summarize(std::span<const TrialRecord> records) {
  using Key = std::tuple<Protocol, double, int64_t, int64_t>;
  std::vector<Key> keys;
  std::vector<std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) {
    const Key key{r.protocol, r.eps, r.domain_size, r.n};
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.emplace_back();
      it = keys.end() - 1;
    }
    groups[it - keys.begin()].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (size_t g = 0; g < keys.size(); ++g) {
    SummaryRow row;
    std::tie(row.protocol, row.eps, row.domain_size, row.n) = keys[g];
    row.trials = static_cast<int64_t>(groups[g].size());
    std::vector<double> errors;
    int64_t successes = 0;
    double error_sum = 0.0;
    for (const TrialRecord* r : groups[g]) {
      successes += r->success ? 1 : 0;
      errors.push_back(r->abs_error.ToDouble());
      error_sum += errors.back();
    }
    std::sort(errors.begin(), errors.end());
    const double trials = static_cast<double>(row.trials);
    row.success_rate = static_cast<double>(successes) / trials;
    row.success_std = SuccessStd(row.success_rate, row.trials);
    row.mean_abs_error = error_sum / trials;
    row.error_p50 = NearestRank(errors, 0.5);
    row.error_p90 = NearestRank(errors, 0.9);
    rows.push_back(row);
  }
  return rows;
}

absl::StatusOr<ExperimentResult> RunExperiment(
    const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;

  absl::flat_hash_set<uint64_t> seeds;
  for (int64_t t = 0; t < config.trials; ++t) {
    if (!seeds.insert(TrialSeed(config.seed, t)).second) {
      return absl::InternalError(
          absl::StrCat("trial seed collision at trial ", t));
    }
  }

  std::optional<Dataset> shared;
  if (!config.dataset_per_trial || config.dataset.kind == DatasetKind::kFile) {
    absl::StatusOr<Dataset> ds = BuildDataset(config, DatasetSeed(config.seed));
    if (!ds.ok()) return ds.status();
    shared = *std::move(ds);
  }

  const int64_t items = config.trials * static_cast<int64_t>(config.eps.size());
  std::vector<TrialRecord> records(items);
  std::vector<absl::Status> statuses(items);
  std::atomic<int64_t> next{0};
  auto worker = [&]() {
    for (int64_t k = next.fetch_add(1); k < items; k = next.fetch_add(1)) {
      const double eps = config.eps[k / config.trials];
      const int64_t trial = k % config.trials;
      absl::StatusOr<TrialRecord> record;
      if (shared.has_value()) {
        record = RunTrial(config, *shared, eps, trial);
      } else {
        absl::StatusOr<Dataset> ds = BuildDataset(
            config, DatasetSeed(TrialSeed(config.seed, trial)));
        record = ds.ok() ? RunTrial(config, *ds, eps, trial)
                         : absl::StatusOr<TrialRecord>(ds.status());
      }
      if (record.ok()) {
        records[k] = *std::move(record);
      } else {
        statuses[k] = record.status();
      }
    }
  };
  const int64_t workers = std::min<int64_t>(config.threads, items);
  std::vector<std::thread> pool;
  for (int64_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }

  ExperimentResult result;
  result.summary = Summarize(records);
  result.trials = std::move(records);
  return result;
}

std::string FormatTrialRow(const TrialRecord& r) {
  std::string reason = absl::StrReplaceAll(
      r.reason, {{",", ";"}, {"\n", " "}, {"\r", " "}});
  return absl::StrCat(ProtocolName(r.protocol), ",", r.seed, ",", r.trial,
                      ",", r.n, ",", r.domain_size, ",", Num(r.eps), ",",
                      Num(r.delta), ",", Num(r.alpha_test.ToDouble()), ",",
                      r.m_tilde, ",", Num(r.abs_error.ToDouble()), ",",
                      r.success ? 1 : 0, ",", r.users_consumed, ",", reason);
}

std::string FormatTrialCsv(std::span<const TrialRecord> records) {
  std::string out = absl::StrCat(kTrialCsvHeader, "\n");
  for (const TrialRecord& r : records) {
    absl::StrAppend(&out, FormatTrialRow(r), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<TrialRecord>> ParseTrialCsv(
    absl::string_view text) {
  std::vector<TrialRecord> records;
  bool header_seen = false;
  int64_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line == kTrialCsvHeader) {
      header_seen = true;
      continue;
    }
    if (!header_seen) {
      return absl::InvalidArgumentError("trial CSV header missing");
    }
    std::vector<absl::string_view> f = absl::StrSplit(line, ',');
    if (f.size() != 13) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected 13 fields, got ",
                       f.size()));
    }
    TrialRecord r;
    absl::StatusOr<Protocol> protocol = ParseProtocol(f[0]);
    absl::StatusOr<Rational> alpha = Rational::Parse(f[7]);
    absl::StatusOr<Rational> error = Rational::Parse(f[9]);
    int success = 0;
    bool ok = protocol.ok() && alpha.ok() && error.ok() &&
              absl::SimpleAtoi(f[1], &r.seed) &&
              absl::SimpleAtoi(f[2], &r.trial) &&
              absl::SimpleAtoi(f[3], &r.n) &&
              absl::SimpleAtoi(f[4], &r.domain_size) &&
              absl::SimpleAtod(f[5], &r.eps) &&
              absl::SimpleAtod(f[6], &r.delta) &&
              absl::SimpleAtoi(f[8], &r.m_tilde) &&
              absl::SimpleAtoi(f[10], &success) &&
              absl::SimpleAtoi(f[11], &r.users_consumed);
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed trial row"));
    }
    r.protocol = *protocol;
    r.alpha_test = *alpha;
    r.abs_error = *error;
    r.success = success != 0;
    r.reason = std::string(f[12]);
    records.push_back(std::move(r));
  }
  if (!header_seen) return absl::InvalidArgumentError("trial CSV is empty");
  return records;
}

std::string FormatSummaryCsv(std::span<const SummaryRow> rows) {
  std::string out = absl::StrCat(kSummaryCsvHeader, "\n");
  for (const SummaryRow& r : rows) {
    absl::StrAppend(&out, ProtocolName(r.protocol), ",", Num(r.eps), ",",
                    r.domain_size, ",", r.n, ",", r.trials, ",",
                    Num(r.success_rate), ",", Num(r.success_std), ",",
                    Num(r.mean_abs_error), ",", Num(r.error_p50), ",",
                    Num(r.error_p90), "\n");
  }
  return out;
}

}  // namespace ldpq
