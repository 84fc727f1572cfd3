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

#include "vecforge/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vecforge/error.h"
#include "vecforge/format.h"

namespace vecforge {

std::vector<double> ParseGrid(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw Error(ErrorCode::kGridError, fmt::format("grid '{}' is not start:stop:step", spec));
  }
  double start, stop, step;
  try {
    start = ParseDouble(spec.substr(0, first), "grid start");
    stop = ParseDouble(spec.substr(first + 1, second - first - 1), "grid stop");
    step = ParseDouble(spec.substr(second + 1), "grid step");
  } catch (const Error& e) {
    throw Error(ErrorCode::kGridError, e.what());
  }
  if (!(step > 0.0)) throw Error(ErrorCode::kGridError, fmt::format("grid step {} must be > 0", step));
  if (stop < start) {
    throw Error(ErrorCode::kGridError, fmt::format("grid '{}' is empty (stop < start)", spec));
  }
  const double ratio = (stop - start) / step;
  const double whole = std::round(ratio);
  const double count = std::fabs(ratio - whole) <= 1e-9 ? whole : std::floor(ratio);
  if (count > 1e7) throw Error(ErrorCode::kGridError, "grid has too many points");
  std::vector<double> grid;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(count); ++i) {
    const double v = start + static_cast<double>(i) * step;
    grid.push_back(std::round(v * 1e12) / 1e12 + 0.0);
  }
  return grid;
}

std::size_t ResolveThreadCount(std::size_t requested) {
  std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VECFORGE_NUM_THREADS"); env != nullptr && *env != '\0') {
    try {
      const std::size_t cap = ParseUnsigned(env, "VECFORGE_NUM_THREADS");
      if (cap > 0) n = std::min(n, cap);
    } catch (const Error&) {
      // Ignore a malformed cap rather than failing the run.
    }
  }
  return std::max<std::size_t>(n, 1);
}

namespace {

std::map<std::string, std::map<std::string, std::vector<double>>> IndexScores(
    const std::vector<ScoreRow>& rows) {
  std::map<std::string, std::map<std::string, std::vector<double>>> by_metric;
  for (const ScoreRow& r : rows) {
    const double alpha = ParseDouble(r.utterance_id, "external score alpha");
    by_metric[r.metric][FormatDouble(alpha)].push_back(r.value);
  }
  return by_metric;
}

}  // namespace

SweepResult RunSweep(const ToyModel& base, const TaskVector& first, const TaskVector* second,
                     std::span<const double> grid, std::span<const SyntheticTask> tasks,
                     const SweepOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::kGridError, "empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::kGridError, "grid values must be strictly increasing");
    }
  }
  if (tasks.empty() || tasks.size() > 2) {
    throw Error(ErrorCode::kConfigError, "a sweep evaluates one or two tasks");
  }

  SweepResult result;
  result.metric_names.push_back("mse");
  if (tasks.size() == 2) {
    result.metric_names.push_back("mse2");
    result.metric_names.push_back("combined_mse");
  }
  const auto scores = IndexScores(options.external_scores);
  for (const auto& [metric, by_alpha] : scores) {
    for (double alpha : grid) {
      if (!by_alpha.contains(FormatDouble(alpha))) {
        throw Error(ErrorCode::kConfigError,
                    fmt::format("external metric '{}' has no score for alpha {}", metric,
                                FormatDouble(alpha)));
      }
    }
    result.metric_names.push_back("ext_" + metric);
  }

  const bool mix = second != nullptr;
  const Checkpoint& weights = base.weights();
  std::vector<TaskVector> pair;
  if (mix) pair = {first, *second};

  auto evaluate_point = [&](double alpha) {
    SweepRow row;
    row.alpha = alpha;
    Checkpoint merged;
    if (mix) {
      row.alpha2 = 1.0 - alpha;
      const double coeffs[2] = {alpha, *row.alpha2};
      merged = Apply(weights, Compose(pair, coeffs, options.merge), 1.0, options.merge);
    } else {
      merged = Apply(weights, first, alpha, options.merge);
    }
    const ToyModel model = base.WithWeights(std::move(merged));
    const double mse = Evaluate(model, tasks[0], options.samples);
    row.metrics.emplace_back("mse", mse);
    if (tasks.size() == 2) {
      const double mse2 = Evaluate(model, tasks[1], options.samples);
      row.metrics.emplace_back("mse2", mse2);
      row.metrics.emplace_back("combined_mse", 0.5 * (mse + mse2));
    }
    for (const auto& [metric, by_alpha] : scores) {
      const auto& values = by_alpha.at(FormatDouble(alpha));
      double sum = 0.0;
      for (double v : values) sum += v;
      row.metrics.emplace_back("ext_" + metric, sum / static_cast<double>(values.size()));
    }
    return row;
  };

  // Validate once up front so worker threads only see evaluation errors.
  evaluate_point(grid.front());

  result.rows.resize(grid.size());
  const std::size_t threads = std::min(ResolveThreadCount(options.threads), grid.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < grid.size(); i = next++) {
        result.rows[i] = evaluate_point(grid[i]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  result.config_echo = {
      {"mode", mix ? "mix" : "single"},
      {"grid", options.grid_spec},
      {"task", tasks[0].id()},
      {"task2", tasks.size() == 2 ? tasks[1].id() : ""},
      {"samples", std::to_string(options.samples)},
      {"task_seed", std::to_string(tasks[0].seed())},
      {"base_fingerprint", Fingerprint(weights)},
      {"vector_base_fingerprint", first.provenance.base_fingerprint},
  };
  return result;
}

std::string SweepToCsv(const SweepResult& result) {
  std::string out = "alpha,alpha2";
  for (const std::string& name : result.metric_names) out += "," + CsvEscape(name);
  out += "\n";
  for (const SweepRow& row : result.rows) {
    out += FormatDouble(row.alpha);
    out += ",";
    if (row.alpha2) out += FormatDouble(*row.alpha2);
    for (const auto& [name, value] : row.metrics) out += "," + FormatDouble(value);
    out += "\n";
  }
  return out;
}

std::string SweepToJson(const SweepResult& result) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : result.config_echo) config[k] = v;
  doc["config"] = config;
  doc["metric_names"] = result.metric_names;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : result.rows) {
    nlohmann::ordered_json r;
    r["alpha"] = row.alpha;
    r["alpha2"] = row.alpha2 ? nlohmann::ordered_json(*row.alpha2) : nlohmann::ordered_json();
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [name, value] : row.metrics) metrics[name] = value;
    r["metrics"] = metrics;
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

}  // namespace vecforge
