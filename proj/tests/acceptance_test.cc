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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "ldpq/bayess.h"
#include "ldpq/coin_oracle.h"
#include "ldpq/core.h"
#include "ldpq/experiment.h"
#include "ldpq/naive_nbs.h"
#include "ldpq/randomized_response.h"
#include "ldpq/weights.h"

namespace ldpq {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int Threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Sigma of a difference of two independent success rates.
double DiffSigma(const SummaryRow& a, const SummaryRow& b) {
  return std::hypot(a.success_std, b.success_std);
}

std::vector<SummaryRow> MustRun(const ExperimentConfig& config) {
  absl::StatusOr<ExperimentResult> result = RunExperiment(config);
  if (!result.ok()) {
    std::fprintf(stderr, "experiment failed: %s\n",
                 result.status().ToString().c_str());
    std::exit(2);
  }
  return result->summary;
}

const SummaryRow& RowAt(const std::vector<SummaryRow>& rows, double eps) {
  for (const SummaryRow& row : rows) {
    if (row.eps == eps) return row;
  }
  std::fprintf(stderr, "no summary row for eps %g\n", eps);
  std::exit(2);
}

Outcome UnbiasIdentity() {
  double worst = 0.0;
  for (double eps : {0.1, 0.5, 1.0, std::log(3.0), 5.0}) {
    RRChannel channel = *RRChannel::Create(eps);
    for (int k = 0; k <= 100; ++k) {
      const double p = k / 100.0;
      const double forward = p * channel.OutputOneProb(true) +
                             (1 - p) * channel.OutputOneProb(false);
      worst = std::max(worst, std::abs(*RRUnbias(forward, eps) - p));
    }
  }
  return {worst <= 1e-12, absl::StrFormat("max |error| = %.3g", worst)};
}

Outcome PosteriorConservation() {
  Rng rng(20260101);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double tau = unit(rng);
    const double alpha = 0.5 * std::min(tau, 1 - tau) * unit(rng);
    BacParams params = *BacQuantileAndCapacity(tau, alpha);
    const int64_t size = 1 + k % 64;
    std::vector<double> v(size);
    double total = 0.0;
    for (double& x : v) total += (x = unit(rng));
    std::unique_ptr<WeightVector> w = MakeUniformWeights(
        size, k % 2 ? WeightKind::kTree : WeightKind::kDense);
    for (int64_t i = 1; i <= size; ++i) w->Set(i, v[i - 1] / total);
    const int64_t j = std::uniform_int_distribution<int64_t>(1, size)(rng);
    BayesUpdate(*w, j, std::bernoulli_distribution(0.5)(rng), params);
    worst = std::max(worst, std::abs(w->Total() - 1));
  }
  return {worst <= 1e-9, absl::StrFormat("max |sum - 1| = %.3g", worst)};
}

void ForEachMultiset(int64_t n, int64_t domain,
                     const std::function<void(const std::vector<int64_t>&)>&
                         fn) {
  std::vector<int64_t> v(n, 1);
  while (true) {
    fn(v);
    int64_t k = n - 1;
    while (k >= 0 && v[k] == domain) --k;
    if (k < 0) return;
    ++v[k];
    for (int64_t j = k + 1; j < n; ++j) v[j] = v[k];
  }
}

Outcome NoiselessExactness() {
  const Rational half(1, 2);
  const Rational alpha(1, 25);
  const int64_t replicated = 6000;
  int64_t naive_checked = 0;
  int64_t naive_wrong = 0;
  int worst_family = 201;
  std::string worst_name;
  for (int64_t domain = 2; domain <= 16; ++domain) {
    for (int64_t n = 1; n <= 6; ++n) {
      std::vector<std::vector<int64_t>> family;
      ForEachMultiset(n, domain, [&](const std::vector<int64_t>& v) {
        family.push_back(v);
      });
      // Exact-CDF pivots: the search must be right on every multiset.
      for (const std::vector<int64_t>& v : family) {
        Dataset ds = *Dataset::Create(v, domain);
        auto exact = [&ds](int64_t coin, int64_t) -> absl::StatusOr<double> {
          return EmpiricalCdf(ds, coin)->ToDouble();
        };
        const int64_t m = *MonotoneBinarySearch(domain, exact);
        ++naive_checked;
        if (!*IsGoodCoin(ds, m, half, alpha)) ++naive_wrong;
      }
      // BayeSS on the population with every value repeated, which keeps
      // the CDF and leaves enough users for the search.
      int good = 0;
      for (int s = 0; s < 200; ++s) {
        Rng rng(TrialSeed(static_cast<uint64_t>(domain * 100 + n), s));
        const std::vector<int64_t>& base =
            family.size() <= 200
                ? family[s % family.size()]
                : family[std::uniform_int_distribution<size_t>(
                      0, family.size() - 1)(rng)];
        std::vector<int64_t> values;
        for (int64_t r = 0; r < replicated / n; ++r) {
          values.insert(values.end(), base.begin(), base.end());
        }
        Dataset ds = *Dataset::Create(std::move(values), domain);
        absl::StatusOr<CoinResult> result =
            DpBayess(ds, RRChannel::Identity(), rng);
        if (result.ok() && *IsGoodCoin(ds, result->index, half, alpha)) ++good;
      }
      if (good < worst_family) {  // first family on ties
        worst_family = good;
        worst_name = absl::StrCat("B=", domain, " n=", n);
      }
    }
  }
  return {naive_wrong == 0 && worst_family >= 195,
          absl::StrFormat("naive wrong on %d of %d multisets; bayess worst "
                          "family %s with %d/200",
                          naive_wrong, naive_checked, worst_name,
                          worst_family)};
}

struct FigureRuns {
  std::vector<SummaryRow> bayess;
  std::vector<SummaryRow> naive;
  std::vector<SummaryRow> hier;
};

ExperimentConfig FigureConfig(Protocol protocol, int64_t n) {
  ExperimentConfig config;
  config.protocol = protocol;
  config.n = n;
  config.domain_size = 1 << 18;
  config.eps = {0.57, 1.0, 2.0};
  config.alpha_test = Rational(1, 25);
  config.trials = 200;
  config.seed = 2026;
  config.threads = Threads();
  return config;
}

FigureRuns RunFigure(int64_t n) {
  return {MustRun(FigureConfig(Protocol::kBayess, n)),
          MustRun(FigureConfig(Protocol::kNaive, n)),
          MustRun(FigureConfig(Protocol::kHierarchical, n))};
}

Outcome FigureOrdering(const FigureRuns& runs) {
  bool pass = true;
  std::vector<std::string> parts;
  for (double eps : {0.57, 1.0, 2.0}) {
    const SummaryRow& b = RowAt(runs.bayess, eps);
    const SummaryRow& v = RowAt(runs.naive, eps);
    const SummaryRow& h = RowAt(runs.hier, eps);
    pass = pass && b.success_rate > v.success_rate &&
           v.success_rate > h.success_rate;
    parts.push_back(absl::StrFormat("eps=%g bayess=%.3f naive=%.3f hier=%.3f",
                                    eps, b.success_rate, v.success_rate,
                                    h.success_rate));
  }
  const SummaryRow& b = RowAt(runs.bayess, 0.57);
  const SummaryRow& v = RowAt(runs.naive, 0.57);
  const double gap = b.success_rate - v.success_rate;
  const double need = 2 * (b.success_std + v.success_std);
  pass = pass && gap > need;
  parts.push_back(absl::StrFormat("gap at 0.57 = %.3f vs 2(s1+s2) = %.3f", gap,
                                  need));
  return {pass, absl::StrJoin(parts, "; ")};
}

Outcome UniformIntervalLevel() {
  ExperimentConfig config;
  config.protocol = Protocol::kBayess;
  config.n = 2500;
  config.domain_size = 1000000;
  config.eps = {1.0};
  config.trials = 200;
  config.seed = 2026;
  config.dataset.kind = DatasetKind::kUniformInterval;
  config.threads = Threads();
  config.alpha_test = Rational(1, 25);
  const double at_004 = MustRun(config)[0].success_rate;
  config.alpha_test = Rational(1, 20);
  const double at_005 = MustRun(config)[0].success_rate;
  return {at_004 >= 0.75,
          absl::StrFormat("success %.3f at alpha_test 0.04, %.3f at 0.05 "
                          "(threshold 0.8 - 0.05)",
                          at_004, at_005)};
}

Outcome DriftBound() {
  const int64_t n = 1000;
  const int64_t domain = 16;
  Rng rng(77);
  std::vector<int64_t> values(n);
  for (int64_t& x : values) {
    x = std::uniform_int_distribution<int64_t>(1, domain)(rng);
  }
  Dataset ds = *Dataset::Create(std::move(values), domain);
  const std::vector<double> drift = MeasureMaxDrift(ds, 10000, rng);
  bool pass = true;
  std::vector<std::string> parts;
  for (double t0 : {0.1, 0.15, 0.2}) {
    const double hits = static_cast<double>(std::count_if(
        drift.begin(), drift.end(), [t0](double d) { return d >= t0; }));
    const double rate = hits / static_cast<double>(drift.size());
    const double bound = domain * 2 * std::exp(-t0 * t0 * (n / 2.0) / 2);
    pass = pass && rate <= bound;
    parts.push_back(
        absl::StrFormat("t0=%g: %.4f <= %.4g", t0, rate, bound));
  }
  return {pass, absl::StrJoin(parts, "; ")};
}

Outcome BacMath() {
  double worst_q = 0.0;
  for (double alpha : {0.01, 0.1, 0.24}) {
    worst_q = std::max(
        worst_q, std::abs(BacQuantileAndCapacity(0.5, alpha)->q_star - 0.5));
  }
  const double h = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  const double cap_err =
      std::abs(BacQuantileAndCapacity(0.5, 0.25)->capacity - (1 - h));
  Rng rng(5);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  double worst_norm = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double tau = unit(rng);
    const double alpha = 0.5 * std::min(tau, 1 - tau) * unit(rng);
    BacParams p = *BacQuantileAndCapacity(tau, alpha);
    const double q = p.q_star;
    worst_norm = std::max({worst_norm,
                           std::abs(q * p.d00 + (1 - q) * p.d01 - 1),
                           std::abs(q * p.d10 + (1 - q) * p.d11 - 1)});
  }
  return {worst_q <= 1e-9 && cap_err <= 1e-9 && worst_norm <= 1e-12,
          absl::StrFormat("|q - 1/2| <= %.2g, capacity error %.2g, "
                          "normalization error %.2g",
                          worst_q, cap_err, worst_norm)};
}

Outcome ShuffleDominance() {
  ExperimentConfig config;
  config.n = 10000000;
  config.domain_size = 1 << 16;
  config.eps = {0.5, 1.0, 3.0};
  config.delta = 1e-8;
  config.trials = 50;
  config.seed = 2026;
  config.threads = Threads();
  config.protocol = Protocol::kShuffleNaive;
  const std::vector<SummaryRow> shuffled = MustRun(config);
  config.protocol = Protocol::kNaive;
  const std::vector<SummaryRow> plain = MustRun(config);
  bool pass = true;
  std::vector<std::string> parts;
  for (double eps : {0.5, 1.0, 3.0}) {
    const SummaryRow& s = RowAt(shuffled, eps);
    const SummaryRow& p = RowAt(plain, eps);
    if (eps < 3) {
      pass = pass && s.success_rate >= p.success_rate;
    } else {
      pass = pass &&
             std::abs(s.success_rate - p.success_rate) <= 2 * DiffSigma(s, p);
    }
    parts.push_back(absl::StrFormat("eps=%g shuffle=%.3f naive=%.3f", eps,
                                    s.success_rate, p.success_rate));
  }
  return {pass, absl::StrJoin(parts, "; ")};
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome CliDeterminism() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "ldpq_acceptance";
  std::filesystem::create_directories(dir);
  bool pass = true;
  int64_t compared = 0;
  for (const char* protocol : {"bayess", "naive", "hier"}) {
    std::vector<std::string> trials;
    std::vector<std::string> summaries;
    int run = 0;
    for (int threads : {1, 1, 4}) {
      const std::filesystem::path out =
          dir / absl::StrCat(protocol, "_", run, ".csv");
      const std::filesystem::path summary =
          dir / absl::StrCat(protocol, "_", run, "_summary.csv");
      ++run;
      const std::string command = absl::StrCat(
          LDPQ_CLI_PATH, " run --protocol ", protocol,
          " --n 800 --B 4096 --eps 0.5 --eps 2 --trials 20 --seed 7",
          " --threads ", threads, " --out ", out.string(), " --summary ",
          summary.string());
      if (std::system(command.c_str()) != 0) {
        return {false, absl::StrCat("command failed: ", command)};
      }
      trials.push_back(ReadFile(out));
      summaries.push_back(ReadFile(summary));
    }
    for (size_t k = 1; k < trials.size(); ++k) {
      pass = pass && !trials[0].empty() && trials[k] == trials[0] &&
             summaries[k] == summaries[0];
      ++compared;
    }
  }
  std::filesystem::remove_all(dir);
  return {pass, absl::StrFormat("%d output pairs byte-identical across "
                                "repeats and --threads 1/4",
                                pass ? compared : 0)};
}

Outcome DoublingTrend(const FigureRuns& half, const FigureRuns& base,
                      const FigureRuns& twice) {
  bool pass = true;
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  const std::vector<std::pair<const char*, const std::vector<SummaryRow>*>>
      ladders[] = {
          {{"bayess", &half.bayess}, {"bayess", &base.bayess},
           {"bayess", &twice.bayess}},
          {{"naive", &half.naive}, {"naive", &base.naive},
           {"naive", &twice.naive}},
          {{"hier", &half.hier}, {"hier", &base.hier}, {"hier", &twice.hier}},
      };
  for (const auto& ladder : ladders) {
    for (double eps : {0.57, 1.0, 2.0}) {
      for (size_t k = 0; k + 1 < ladder.size(); ++k) {
        const SummaryRow& a = RowAt(*ladder[k].second, eps);
        const SummaryRow& b = RowAt(*ladder[k + 1].second, eps);
        const double slack =
            (b.success_rate - a.success_rate) + 2 * DiffSigma(a, b);
        pass = pass && slack >= 0;
        if (slack < worst) {
          worst = slack;
          where = absl::StrFormat("%s eps=%g n=%d->%d: %.3f->%.3f",
                                  ladder[k].first, eps, a.n, b.n,
                                  a.success_rate, b.success_rate);
        }
      }
    }
  }
  return {pass, absl::StrCat("tightest step ", where)};
}

}  // namespace
}  // namespace ldpq

int main() {
  using ldpq::Outcome;
  int failures = 0;
  auto report = [&failures](const std::string& name,
                            const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = check();
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (!outcome.pass) ++failures;
    std::printf("%s %s: %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  };

  report("1 unbias identity", ldpq::UnbiasIdentity);
  report("2 posterior conservation", ldpq::PosteriorConservation);
  report("3 noiseless exactness", ldpq::NoiselessExactness);
  ldpq::FigureRuns base;
  report("4 success ordering on Pareto", [&base] {
    base = ldpq::RunFigure(2500);
    return ldpq::FigureOrdering(base);
  });
  report("5 uniform-interval level", ldpq::UniformIntervalLevel);
  report("6 drift bound", ldpq::DriftBound);
  report("7 BAC math", ldpq::BacMath);
  report("8 shuffle dominance", ldpq::ShuffleDominance);
  report("9 CLI determinism", ldpq::CliDeterminism);
  report("trend doubling n", [&base] {
    const ldpq::FigureRuns half = ldpq::RunFigure(1250);
    const ldpq::FigureRuns twice = ldpq::RunFigure(5000);
    return ldpq::DoublingTrend(half, base, twice);
  });
  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures);
  return failures == 0 ? 0 : 1;
}
