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

#include "vecforge/records_io.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vecforge/checkpoint.h"
#include "vecforge/error.h"
#include "vecforge/format.h"

namespace vecforge {

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_data = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_data = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_data = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_data || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        row_has_data = false;
        break;
      default:
        field.push_back(c);
        row_has_data = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::kFormatError, "unterminated quoted CSV field");
  if (row_has_data || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

std::string Trim(std::string s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::size_t Column(const std::vector<std::string>& header, std::initializer_list<std::string_view> names,
                   bool required) {
  for (std::string_view name : names) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return Trim(h) == name; });
    if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  }
  if (required) {
    throw Error(ErrorCode::kFormatError,
                fmt::format("CSV header lacks a '{}' column", *names.begin()));
  }
  return header.size();
}

}  // namespace

std::vector<EvalRecord> ParseEvalRecordsCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  if (rows.empty()) throw Error(ErrorCode::kFormatError, "CSV has no header row");
  const auto& header = rows.front();
  const std::size_t ref = Column(header, {"ref"}, true);
  const std::size_t hyp = Column(header, {"hyp"}, true);
  const std::size_t dur = Column(header, {"duration_seconds"}, true);
  const std::size_t id = Column(header, {"id", "utterance_id"}, false);
  std::vector<EvalRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kFormatError,
                  fmt::format("CSV row {} has {} fields, header has {}", r + 1, row.size(),
                              header.size()));
    }
    EvalRecord rec;
    rec.id = id < row.size() ? row[id] : std::to_string(r);
    rec.ref_text = row[ref];
    rec.hyp_text = row[hyp];
    try {
      rec.duration_seconds = ParseDouble(Trim(row[dur]), "duration_seconds");
    } catch (const Error& e) {
      throw Error(ErrorCode::kFormatError, fmt::format("CSV row {}: {}", r + 1, e.what()));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EvalRecord> ParseEvalRecordsJsonl(std::string_view text) {
  std::vector<EvalRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (Trim(line).empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      EvalRecord rec;
      if (obj.contains("id")) {
        rec.id = obj["id"].is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
      } else if (obj.contains("utterance_id")) {
        rec.id = obj["utterance_id"].get<std::string>();
      } else {
        rec.id = std::to_string(lineno);
      }
      rec.ref_text = obj.at("ref").get<std::string>();
      rec.hyp_text = obj.at("hyp").get<std::string>();
      rec.duration_seconds = obj.at("duration_seconds").get<double>();
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormatError, fmt::format("JSONL line {}: {}", lineno, e.what()));
    }
  }
  return records;
}

std::vector<EvalRecord> LoadEvalRecords(const std::filesystem::path& path) {
  const std::string text = ReadFileBytes(path);
  if (path.extension() == ".jsonl") return ParseEvalRecordsJsonl(text);
  return ParseEvalRecordsCsv(text);
}

EmbeddingSet LoadEmbeddingSet(const std::filesystem::path& path) {
  const Checkpoint ckpt = ReadCheckpoint(path);
  EmbeddingSet set;
  auto it = ckpt.metadata.find("label");
  set.label = it != ckpt.metadata.end() ? it->second : path.stem().string();
  for (const auto& [name, t] : ckpt.tensors) {
    if (t.rank() != 1) {
      throw Error(ErrorCode::kDimMismatch,
                  fmt::format("embedding '{}' has shape {}, expected 1-D", name,
                              ShapeString(t.shape())));
    }
    set.ids.push_back(name);
    set.embeddings.push_back(t);
  }
  return set;
}

std::vector<ScoreRow> ParseScoreTable(std::string_view text) {
  const auto rows = ParseCsv(text);
  if (rows.empty()) throw Error(ErrorCode::kFormatError, "score table has no header row");
  const auto& header = rows.front();
  const std::size_t id = Column(header, {"utterance_id"}, true);
  const std::size_t metric = Column(header, {"metric_name"}, true);
  const std::size_t value = Column(header, {"value"}, true);
  std::vector<ScoreRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kFormatError, fmt::format("score row {} is ragged", r + 1));
    }
    try {
      out.push_back({Trim(row[id]), Trim(row[metric]), ParseDouble(Trim(row[value]), "value")});
    } catch (const Error& e) {
      throw Error(ErrorCode::kFormatError, fmt::format("score row {}: {}", r + 1, e.what()));
    }
  }
  return out;
}

std::vector<ScoreRow> LoadScoreTable(const std::filesystem::path& path) {
  return ParseScoreTable(ReadFileBytes(path));
}

std::vector<ScoreSummary> AggregateScores(const std::vector<ScoreRow>& rows) {
  std::map<std::string, std::vector<double>> by_metric;
  for (const ScoreRow& r : rows) by_metric[r.metric].push_back(r.value);
  std::vector<ScoreSummary> out;
  for (const auto& [metric, values] : by_metric) {
    ScoreSummary s;
    s.metric = metric;
    s.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(s.count));
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vecforge
