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

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "ldpq/core.h"
#include "ldpq/generators.h"

namespace ldpq {
namespace {

ExperimentConfig SmallConfig(Protocol protocol) {
  ExperimentConfig config;
  config.protocol = protocol;
  config.n = 600;
  config.domain_size = 1 << 12;
  config.eps = {0.5, 2.0};
  config.trials = 12;
  config.seed = 99;
  return config;
}

TEST(ExperimentTest, CsvHeaders) {
  EXPECT_EQ(kTrialCsvHeader,
            "protocol,seed,trial,n,B,eps,delta,alpha_test,m_tilde,abs_error,"
            "success,users_consumed,reason");
  EXPECT_EQ(kSummaryCsvHeader,
            "protocol,eps,B,n,trials,success_rate,success_std,mean_abs_error,"
            "error_p50,error_p90");
  const std::string csv = FormatTrialCsv({});
  EXPECT_EQ(csv, std::string(kTrialCsvHeader) + "\n");
}

TEST(ExperimentTest, SeedsAreDistinct) {
  std::set<uint64_t> seen;
  for (uint64_t seed : {0ull, 1ull, 2ull, 12345ull}) {
    seen.insert(DatasetSeed(seed));
    for (int64_t t = 0; t < 1000; ++t) seen.insert(TrialSeed(seed, t));
  }
  EXPECT_EQ(seen.size(), 4u * 1001u);
  EXPECT_EQ(MixSeed(0), 0xe220a8397b1dcdafull);
}

TEST(ExperimentTest, DeterministicAcrossThreadCounts) {
  for (Protocol p : {Protocol::kBayess, Protocol::kNaive,
                     Protocol::kHierarchical}) {
    ExperimentConfig one = SmallConfig(p);
    ExperimentConfig four = one;
    four.threads = 4;
    auto a = RunExperiment(one);
    auto b = RunExperiment(four);
    auto c = RunExperiment(one);
    ASSERT_TRUE(a.ok()) << a.status();
    ASSERT_TRUE(b.ok());
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(FormatTrialCsv(a->trials), FormatTrialCsv(b->trials));
    EXPECT_EQ(FormatTrialCsv(a->trials), FormatTrialCsv(c->trials));
    EXPECT_EQ(FormatSummaryCsv(a->summary), FormatSummaryCsv(b->summary));
    ASSERT_EQ(a->trials.size(), 24u);
    EXPECT_EQ(a->trials[0].eps, 0.5);
    EXPECT_EQ(a->trials[12].eps, 2.0);
    EXPECT_EQ(a->trials[13].trial, 1);
  }
}

TEST(ExperimentTest, SummaryPerProtocolAndEps) {
  auto result = RunExperiment(SmallConfig(Protocol::kNaive));
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->summary.size(), 2u);
  for (const SummaryRow& row : result->summary) {
    EXPECT_EQ(row.protocol, Protocol::kNaive);
    EXPECT_EQ(row.trials, 12);
    EXPECT_EQ(row.n, 600);
    EXPECT_NEAR(row.success_std, SuccessStd(row.success_rate, 12), 1e-15);
    EXPECT_LE(row.error_p50, row.error_p90);
  }
  EXPECT_EQ(result->summary[0].eps, 0.5);
  EXPECT_EQ(result->summary[1].eps, 2.0);
}

TEST(ExperimentTest, AllSuccessHasZeroStd) {
  ExperimentConfig config = SmallConfig(Protocol::kNaive);
  config.eps = {std::numeric_limits<double>::infinity()};
  config.n = 2000;
  config.domain_size = 64;
  config.dataset.kind = DatasetKind::kUniformInterval;
  auto result = RunExperiment(config);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->summary.size(), 1u);
  EXPECT_EQ(result->summary[0].success_rate, 1.0);
  EXPECT_EQ(result->summary[0].success_std, 0.0);
}

TEST(ExperimentTest, InfeasibleRunsAreFailedTrials) {
  ExperimentConfig config = SmallConfig(Protocol::kShuffleNaive);
  config.delta = 1e-8;
  config.eps = {1.0};
  config.trials = 3;
  auto result = RunExperiment(config);
  ASSERT_TRUE(result.ok());
  for (const TrialRecord& r : result->trials) {
    EXPECT_FALSE(r.success);
    EXPECT_EQ(r.m_tilde, -1);
    EXPECT_EQ(r.abs_error, Rational(1));
    EXPECT_NE(r.reason.find("infeasible"), std::string::npos);
  }
  EXPECT_EQ(result->summary[0].success_rate, 0.0);
}

TEST(ExperimentTest, CsvRoundTrip) {
  auto result = RunExperiment(SmallConfig(Protocol::kBayess));
  ASSERT_TRUE(result.ok());
  const std::string csv = FormatTrialCsv(result->trials);
  auto parsed = ParseTrialCsv(csv);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(FormatTrialCsv(*parsed), csv);
  // abs_error is printed to 10 significant digits, so summaries of the
  // parsed rows agree up to that rounding.
  const std::vector<SummaryRow> again = Summarize(*parsed);
  ASSERT_EQ(again.size(), result->summary.size());
  for (size_t k = 0; k < again.size(); ++k) {
    EXPECT_EQ(again[k].success_rate, result->summary[k].success_rate);
    EXPECT_EQ(again[k].trials, result->summary[k].trials);
    EXPECT_NEAR(again[k].mean_abs_error, result->summary[k].mean_abs_error,
                1e-9);
    EXPECT_NEAR(again[k].error_p90, result->summary[k].error_p90, 1e-9);
  }
  EXPECT_FALSE(ParseTrialCsv("protocol,seed\nbayess,1\n").ok());
}

TEST(ExperimentTest, ConfigValidation) {
  ExperimentConfig config;
  EXPECT_TRUE(config.Validate().ok());
  config.trials = 0;
  EXPECT_FALSE(config.Validate().ok());
  config = ExperimentConfig();
  config.eps = {};
  EXPECT_FALSE(config.Validate().ok());
  config = ExperimentConfig();
  config.eps = {-1.0};
  EXPECT_FALSE(config.Validate().ok());
  config = ExperimentConfig();
  config.threads = 0;
  EXPECT_FALSE(config.Validate().ok());
}

TEST(ExperimentTest, DatasetSpecs) {
  EXPECT_EQ(ParseDatasetSpec("pareto")->kind, DatasetKind::kPareto);
  EXPECT_EQ(ParseDatasetSpec("uniform-interval")->kind,
            DatasetKind::kUniformInterval);
  auto file = ParseDatasetSpec("file:/tmp/x.txt");
  ASSERT_TRUE(file.ok());
  EXPECT_EQ(file->path, "/tmp/x.txt");
  EXPECT_EQ(DatasetSpecName(*file), "file:/tmp/x.txt");
  EXPECT_FALSE(ParseDatasetSpec("zipf").ok());
  EXPECT_FALSE(ParseDatasetSpec("file:").ok());
}

TEST(ExperimentTest, SharedDatasetMatchesGenerator) {
  ExperimentConfig config = SmallConfig(Protocol::kNaive);
  Dataset ds = *BuildDataset(config, DatasetSeed(config.seed));
  Dataset direct =
      *GenPareto(config.n, config.domain_size, DatasetSeed(config.seed));
  EXPECT_TRUE(std::equal(ds.values().begin(), ds.values().end(),
                         direct.values().begin(), direct.values().end()));
}

TEST(ExperimentTest, PerTrialDatasetsDiffer) {
  ExperimentConfig config = SmallConfig(Protocol::kNaive);
  config.dataset_per_trial = true;
  config.dataset.kind = DatasetKind::kUniformInterval;
  auto a = RunExperiment(config);
  ASSERT_TRUE(a.ok());
  config.threads = 3;
  auto b = RunExperiment(config);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(FormatTrialCsv(a->trials), FormatTrialCsv(b->trials));
}

}  // namespace
}  // namespace ldpq
