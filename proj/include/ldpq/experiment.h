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

#ifndef LDPQ_EXPERIMENT_H_
#define LDPQ_EXPERIMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldpq/core.h"
#include "ldpq/rational.h"

namespace ldpq {

enum class DatasetKind { kPareto, kUniformInterval, kFile };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kPareto;
  std::string path;  // kFile only
};

// "pareto", "uniform-interval" or "file:PATH".
absl::StatusOr<DatasetSpec> ParseDatasetSpec(absl::string_view text);
std::string DatasetSpecName(const DatasetSpec& spec);

struct ExperimentConfig {
  Protocol protocol = Protocol::kBayess;
  int64_t n = 2500;
  int64_t domain_size = 262144;
  std::vector<double> eps = {1.0};
  double delta = 0.0;
  Rational alpha_test = Rational(1, 25);
  int64_t trials = 200;
  uint64_t seed = 1;
  DatasetSpec dataset;
  // Draw a fresh dataset for every trial instead of one per experiment.
  bool dataset_per_trial = false;
  int threads = 1;

  absl::Status Validate() const;
};

// SplitMix64 finalizer; a bijection on 64-bit words.
uint64_t MixSeed(uint64_t x);
uint64_t TrialSeed(uint64_t seed, int64_t trial);
uint64_t DatasetSeed(uint64_t seed);

// Generates (or reads) the dataset described by `config` with `seed`.
absl::StatusOr<Dataset> BuildDataset(const ExperimentConfig& config,
                                     uint64_t seed);

// One protocol run on `dataset`. An infinite eps disables the noise.
absl::StatusOr<CoinResult> RunProtocol(Protocol protocol,
                                       const Dataset& dataset, double eps,
                                       double delta, Rng& rng);

// Runs and scores one trial. Infeasible parameters and exhausted users are
// recorded as a failed trial with a reason; other errors are returned.
absl::StatusOr<TrialRecord> RunTrial(const ExperimentConfig& config,
                                     const Dataset& dataset, double eps,
                                     int64_t trial);

struct SummaryRow {
  Protocol protocol = Protocol::kBayess;
  double eps = 0.0;
  int64_t domain_size = 0;
  int64_t n = 0;
  int64_t trials = 0;
  double success_rate = 0.0;
  double success_std = 0.0;
  double mean_abs_error = 0.0;
  double error_p50 = 0.0;
  double error_p90 = 0.0;
};

// One row per (protocol, eps, B, n), in order of first appearance. Error
// quantiles use the nearest-rank rule.
std::vector<SummaryRow> Summarize(std::span<const TrialRecord> records);

struct ExperimentResult {
  std::vector<TrialRecord> trials;  // by eps (config order), then trial
  std::vector<SummaryRow> summary;
};

// Trials run on config.threads workers; each trial owns its generator
// seeded by TrialSeed, so the output does not depend on scheduling.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

inline constexpr absl::string_view kTrialCsvHeader =
    "protocol,seed,trial,n,B,eps,delta,alpha_test,m_tilde,abs_error,success,"
    "users_consumed,reason";
inline constexpr absl::string_view kSummaryCsvHeader =
    "protocol,eps,B,n,trials,success_rate,success_std,mean_abs_error,"
    "error_p50,error_p90";

std::string FormatTrialRow(const TrialRecord& record);
// Header line plus one line per record.
std::string FormatTrialCsv(std::span<const TrialRecord> records);
absl::StatusOr<std::vector<TrialRecord>> ParseTrialCsv(absl::string_view text);
std::string FormatSummaryCsv(std::span<const SummaryRow> rows);

}  // namespace ldpq

#endif  // LDPQ_EXPERIMENT_H_
