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

// Command-line front end: gen, run, sweep and report.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldpq/core.h"
#include "ldpq/experiment.h"
#include "ldpq/generators.h"
#include "ldpq/rational.h"

namespace {

struct CommonFlags {
  std::vector<double> eps = {1.0};
  double delta = 0.0;
  std::string alpha_test = "0.04";
  int64_t trials = 200;
  uint64_t seed = 1;
  std::string dataset = "pareto";
  std::string out;
  std::string summary;
  int threads = 1;
  bool dataset_per_trial = false;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--eps", f.eps, "Local privacy budget (repeatable)")
      ->capture_default_str();
  cmd->add_option("--delta", f.delta, "Central delta (shuffle-naive only)")
      ->capture_default_str();
  cmd->add_option("--alpha-test", f.alpha_test,
                  "Success tolerance around 1/2, decimal or fraction")
      ->capture_default_str();
  cmd->add_option("--trials", f.trials, "Trials per eps")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--dataset", f.dataset,
                  "pareto | uniform-interval | file:PATH")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Trial CSV path (default stdout)");
  cmd->add_option("--summary", f.summary, "Summary CSV path");
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->capture_default_str();
  cmd->add_flag("--dataset-per-trial", f.dataset_per_trial,
                "Draw a fresh dataset for every trial");
}

absl::StatusOr<ldpq::ExperimentConfig> BaseConfig(const CommonFlags& f) {
  ldpq::ExperimentConfig config;
  config.eps = f.eps;
  config.delta = f.delta;
  absl::StatusOr<ldpq::Rational> alpha = ldpq::Rational::Parse(f.alpha_test);
  if (!alpha.ok()) return alpha.status();
  config.alpha_test = *alpha;
  config.trials = f.trials;
  config.seed = f.seed;
  absl::StatusOr<ldpq::DatasetSpec> spec = ldpq::ParseDatasetSpec(f.dataset);
  if (!spec.ok()) return spec.status();
  config.dataset = *spec;
  config.threads = f.threads;
  config.dataset_per_trial = f.dataset_per_trial;
  return config;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return std::cout ? absl::OkStatus()
                     : absl::DataLossError("failed writing stdout");
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::Status Emit(const CommonFlags& f,
                  const std::vector<ldpq::TrialRecord>& trials) {
  if (absl::Status s = WriteText(f.out, ldpq::FormatTrialCsv(trials));
      !s.ok()) {
    return s;
  }
  const std::string summary =
      ldpq::FormatSummaryCsv(ldpq::Summarize(trials));
  if (!f.summary.empty()) return WriteText(f.summary, summary);
  std::cerr << summary;
  return absl::OkStatus();
}

// Fills options that were not given on the command line from a flat
// "key = value" file; list values use TOML array syntax.
absl::Status ApplyConfigFile(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return absl::OkStatus();
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
  }
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || !item.parents.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": unknown key '", item.fullname(), "'"));
    }
    if (opt->count() > 0) continue;
    try {
      for (const std::string& value : item.inputs) opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": key '", key, "': ", e.what()));
    }
  }
  return absl::OkStatus();
}

int Fail(const absl::Status& status) {
  std::cerr << "ldpq: " << status << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private quantile estimation simulator"};
  app.require_subcommand(1);

  // gen
  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic dataset file");
  std::string gen_dataset = "pareto";
  int64_t gen_n = 2500;
  int64_t gen_b = 262144;
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--dataset", gen_dataset, "pareto | uniform-interval")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "Users")->capture_default_str();
  gen->add_option("--B", gen_b, "Domain size")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  // run
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  CommonFlags run_flags;
  std::string run_protocol = "bayess";
  int64_t run_n = 2500;
  int64_t run_b = 262144;
  run->add_option("--protocol", run_protocol,
                  "bayess | naive | hier | shuffle-naive")
      ->capture_default_str();
  run->add_option("--n", run_n, "Users")->capture_default_str();
  run->add_option("--B", run_b, "Domain size")->capture_default_str();
  AddCommonFlags(run, run_flags);

  // sweep
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a grid over protocols, eps, B and n");
  CommonFlags sweep_flags;
  std::vector<std::string> sweep_protocols = {"bayess", "naive", "hier"};
  std::vector<int64_t> sweep_n = {2500};
  std::vector<int64_t> sweep_b = {262144};
  sweep->add_option("--protocol", sweep_protocols, "Protocols (repeatable)")
      ->capture_default_str();
  sweep->add_option("--n", sweep_n, "Users (repeatable)")
      ->capture_default_str();
  sweep->add_option("--B", sweep_b, "Domain sizes (repeatable)")
      ->capture_default_str();
  AddCommonFlags(sweep, sweep_flags);

  // report
  CLI::App* report =
      app.add_subcommand("report", "Aggregate trial CSVs into summary rows");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("inputs", report_inputs, "Trial CSV files")->required();
  report->add_option("--out", report_out, "Summary CSV path (default stdout)");

  std::string config_path;
  for (CLI::App* cmd : {gen, run, sweep}) {
    cmd->add_option("--config", config_path,
                    "Flat key = value file; command-line flags win");
  }

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* cmd : {gen, run, sweep}) {
    if (!cmd->parsed()) continue;
    if (absl::Status s = ApplyConfigFile(cmd, config_path); !s.ok()) {
      return Fail(s);
    }
  }

  if (gen->parsed()) {
    ldpq::ExperimentConfig config;
    absl::StatusOr<ldpq::DatasetSpec> spec = ldpq::ParseDatasetSpec(gen_dataset);
    if (!spec.ok()) return Fail(spec.status());
    if (spec->kind == ldpq::DatasetKind::kFile) {
      return Fail(absl::InvalidArgumentError("gen needs a synthetic dataset"));
    }
    config.dataset = *spec;
    config.n = gen_n;
    config.domain_size = gen_b;
    absl::StatusOr<ldpq::Dataset> ds = ldpq::BuildDataset(config, gen_seed);
    if (!ds.ok()) return Fail(ds.status());
    absl::Status s = WriteText(gen_out, ldpq::FormatDataset(*ds));
    return s.ok() ? 0 : Fail(s);
  }

  if (run->parsed()) {
    absl::StatusOr<ldpq::ExperimentConfig> config = BaseConfig(run_flags);
    if (!config.ok()) return Fail(config.status());
    absl::StatusOr<ldpq::Protocol> protocol = ldpq::ParseProtocol(run_protocol);
    if (!protocol.ok()) return Fail(protocol.status());
    config->protocol = *protocol;
    config->n = run_n;
    config->domain_size = run_b;
    absl::StatusOr<ldpq::ExperimentResult> result =
        ldpq::RunExperiment(*config);
    if (!result.ok()) return Fail(result.status());
    absl::Status s = Emit(run_flags, result->trials);
    return s.ok() ? 0 : Fail(s);
  }

  if (sweep->parsed()) {
    absl::StatusOr<ldpq::ExperimentConfig> base = BaseConfig(sweep_flags);
    if (!base.ok()) return Fail(base.status());
    std::vector<ldpq::TrialRecord> all;
    for (const std::string& name : sweep_protocols) {
      absl::StatusOr<ldpq::Protocol> protocol = ldpq::ParseProtocol(name);
      if (!protocol.ok()) return Fail(protocol.status());
      for (int64_t b : sweep_b) {
        for (int64_t n : sweep_n) {
          ldpq::ExperimentConfig config = *base;
          config.protocol = *protocol;
          config.domain_size = b;
          config.n = n;
          absl::StatusOr<ldpq::ExperimentResult> result =
              ldpq::RunExperiment(config);
          if (!result.ok()) return Fail(result.status());
          all.insert(all.end(), result->trials.begin(), result->trials.end());
        }
      }
    }
    absl::Status s = Emit(sweep_flags, all);
    return s.ok() ? 0 : Fail(s);
  }

  if (report->parsed()) {
    std::vector<ldpq::TrialRecord> all;
    for (const std::string& path : report_inputs) {
      std::ifstream in(path);
      if (!in) return Fail(absl::NotFoundError(absl::StrCat("cannot open ", path)));
      std::stringstream buffer;
      buffer << in.rdbuf();
      absl::StatusOr<std::vector<ldpq::TrialRecord>> rows =
          ldpq::ParseTrialCsv(buffer.str());
      if (!rows.ok()) {
        return Fail(absl::Status(rows.status().code(),
                                 absl::StrCat(path, ": ",
                                              rows.status().message())));
      }
      all.insert(all.end(), rows->begin(), rows->end());
    }
    absl::Status s =
        WriteText(report_out, ldpq::FormatSummaryCsv(ldpq::Summarize(all)));
    return s.ok() ? 0 : Fail(s);
  }
  return 0;
}
