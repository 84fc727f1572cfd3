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

#ifndef VECFORGE_RECORDS_IO_H_
#define VECFORGE_RECORDS_IO_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vecforge/eval_metrics.h"

namespace vecforge {

// RFC 4180 CSV: comma separated, double-quoted fields may hold commas,
// newlines and doubled quotes. A trailing newline does not add a row.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);
std::string CsvEscape(std::string_view field);

// Evaluation records from CSV (header with ref, hyp, duration_seconds and an
// optional id / utterance_id column) or JSONL (one object per line with the
// same fields). JSONL is chosen for a .jsonl extension.
std::vector<EvalRecord> ParseEvalRecordsCsv(std::string_view text);
std::vector<EvalRecord> ParseEvalRecordsJsonl(std::string_view text);
std::vector<EvalRecord> LoadEvalRecords(const std::filesystem::path& path);

// One 1-D tensor per utterance in a checkpoint container; the set label is
// the `label` metadata entry, falling back to the file stem.
EmbeddingSet LoadEmbeddingSet(const std::filesystem::path& path);

struct ScoreRow {
  std::string utterance_id;
  std::string metric;
  double value = 0.0;
};

struct ScoreSummary {
  std::string metric;
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

// External per-utterance scores: CSV with utterance_id,metric_name,value.
std::vector<ScoreRow> ParseScoreTable(std::string_view text);
std::vector<ScoreRow> LoadScoreTable(const std::filesystem::path& path);
// One summary per metric, sorted by metric name.
std::vector<ScoreSummary> AggregateScores(const std::vector<ScoreRow>& rows);

}  // namespace vecforge

#endif  // VECFORGE_RECORDS_IO_H_
