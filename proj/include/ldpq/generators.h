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

#ifndef LDPQ_GENERATORS_H_
#define LDPQ_GENERATORS_H_

#include <cstdint>
#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldpq/core.h"

namespace ldpq {

inline constexpr double kParetoShape = 1.5;
inline constexpr double kParetoScale = 2000.0;

// n draws of scale * U^(-1/shape), rounded to the nearest integer and
// clipped into [1, B].
absl::StatusOr<Dataset> GenPareto(int64_t n, int64_t domain_size,
                                  uint64_t seed);

// l and r uniform in [1, B], swapped so that l <= r.
std::pair<int64_t, int64_t> DrawUniformInterval(int64_t domain_size,
                                                Rng& rng);

// n uniform integers in an interval drawn by DrawUniformInterval from the
// same generator.
absl::StatusOr<Dataset> GenUniformInterval(int64_t n, int64_t domain_size,
                                           uint64_t seed);

// Text form: "# B=<int>" then one value per line.
std::string FormatDataset(const Dataset& dataset);
absl::StatusOr<Dataset> ParseDataset(absl::string_view text);

absl::StatusOr<Dataset> ReadDatasetFile(const std::string& path);
absl::Status WriteDatasetFile(const std::string& path, const Dataset& dataset);

}  // namespace ldpq

#endif  // LDPQ_GENERATORS_H_
