// Copyright 2026 The vecforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VECFORGE_SWEEP_H_
#define VECFORGE_SWEEP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vecforge/records_io.h"
#include "vecforge/toy_lab.h"
#include "vecforge/vector_engine.h"

namespace vecforge {

// "start:stop:step", step > 0. The stop value is included when
// (stop - start) is a whole number of steps within 1e-9; points are snapped
// to 1e-12 so 3 * 0.2 prints as 0.6.
std::vector<double> ParseGrid(std::string_view spec);

struct SweepRow {
  double alpha = 0.0;
  std::optional<double> alpha2;  // 1 - alpha in mix mode
  std::vector<std::pair<std::string, double>> metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> metric_names;
  std::vector<std::pair<std::string, std::string>> config_echo;
};

struct SweepOptions {
  std::size_t samples = 1024;
  // 0 picks hardware concurrency, capped by VECFORGE_NUM_THREADS.
  std::size_t threads = 0;
  MergeOptions merge;
  // External per-point scores; utterance_id holds the alpha value. Each
  // metric becomes an `ext_<metric>` column with the mean at that alpha.
  std::vector<ScoreRow> external_scores;
  // Echoed verbatim into the result.
  std::string grid_spec;
};

// Single mode (second == nullptr): row alpha evaluates base + alpha * first.
// Mix mode: base + (alpha * first + (1 - alpha) * second).
// Metrics: `mse` on tasks[0]; with a second task also `mse2` and
// `combined_mse` (their mean).
SweepResult RunSweep(const ToyModel& base, const TaskVector& first, const TaskVector* second,
                     std::span<const double> grid, std::span<const SyntheticTask> tasks,
                     const SweepOptions& options = {});

std::string SweepToCsv(const SweepResult& result);
std::string SweepToJson(const SweepResult& result);

// min(requested or hardware concurrency, VECFORGE_NUM_THREADS), at least 1.
std::size_t ResolveThreadCount(std::size_t requested);

}  // namespace vecforge

#endif  // VECFORGE_SWEEP_H_
