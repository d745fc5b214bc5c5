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

#include "ldpq/generators.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace ldpq {
namespace {

absl::Status CheckShape(int64_t n, int64_t domain_size) {
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (domain_size < 2) {
    return absl::InvalidArgumentError("domain size must be at least 2");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Dataset> GenPareto(int64_t n, int64_t domain_size,
                                  uint64_t seed) {
  if (absl::Status s = CheckShape(n, domain_size); !s.ok()) return s;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int64_t> values(n);
  const double cap = static_cast<double>(domain_size);
  for (int64_t& v : values) {
    const double u = 1.0 - unit(rng);  // (0, 1]
    const double x = std::round(kParetoScale * std::pow(u, -1.0 / kParetoShape));
    v = static_cast<int64_t>(std::clamp(x, 1.0, cap));
  }
  return Dataset::Create(std::move(values), domain_size);
}

std::pair<int64_t, int64_t> DrawUniformInterval(int64_t domain_size,
                                                Rng& rng) {
  std::uniform_int_distribution<int64_t> pick(1, domain_size);
  int64_t l = pick(rng);
  int64_t r = pick(rng);
  if (l > r) std::swap(l, r);
  return {l, r};
}

absl::StatusOr<Dataset> GenUniformInterval(int64_t n, int64_t domain_size,
                                           uint64_t seed) {
  if (absl::Status s = CheckShape(n, domain_size); !s.ok()) return s;
  Rng rng(seed);
  const auto [l, r] = DrawUniformInterval(domain_size, rng);
  std::uniform_int_distribution<int64_t> pick(l, r);
  std::vector<int64_t> values(n);
  for (int64_t& v : values) v = pick(rng);
  return Dataset::Create(std::move(values), domain_size);
}

std::string FormatDataset(const Dataset& dataset) {
  std::string out = absl::StrCat("# B=", dataset.domain_size(), "\n");
  for (int64_t v : dataset.values()) absl::StrAppend(&out, v, "\n");
  return out;
}

absl::StatusOr<Dataset> ParseDataset(absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  if (lines.empty()) return absl::InvalidArgumentError("empty dataset file");
  absl::string_view header = absl::StripAsciiWhitespace(lines[0]);
  int64_t domain_size = 0;
  if (!absl::ConsumePrefix(&header, "# B=") ||
      !absl::SimpleAtoi(header, &domain_size)) {
    return absl::InvalidArgumentError(
        "dataset file must start with a '# B=<int>' line");
  }
  std::vector<int64_t> values;
  for (size_t k = 1; k < lines.size(); ++k) {
    absl::string_view line = absl::StripAsciiWhitespace(lines[k]);
    if (line.empty()) continue;
    int64_t v = 0;
    if (!absl::SimpleAtoi(line, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", k + 1, ": not an integer: '", line, "'"));
    }
    values.push_back(v);
  }
  return Dataset::Create(std::move(values), domain_size);
}

absl::StatusOr<Dataset> ReadDatasetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseDataset(buffer.str());
}

absl::Status WriteDatasetFile(const std::string& path,
                              const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << FormatDataset(dataset);
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

}  // namespace ldpq
