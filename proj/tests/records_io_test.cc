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

#include "gtest/gtest.h"
#include "test_util.h"
#include "vecforge/checkpoint.h"
#include "vecforge/error.h"

namespace vecforge {
namespace {

using ::vecforge::testing::TempDir;
using Rows = std::vector<std::vector<std::string>>;

TEST(RecordsIoTest, CsvQuoting) {
  EXPECT_EQ(ParseCsv("a,b\n1,\"x, \"\"y\"\"\"\n"), (Rows{{"a", "b"}, {"1", "x, \"y\""}}));
  EXPECT_EQ(ParseCsv("a\r\n\"multi\nline\"\r\n"), (Rows{{"a"}, {"multi\nline"}}));
  EXPECT_EQ(ParseCsv("x,,z"), (Rows{{"x", "", "z"}}));
  EXPECT_THROW(ParseCsv("\"open"), Error);
}

TEST(RecordsIoTest, CsvEscapeRoundTrip) {
  EXPECT_EQ(CsvEscape("plain"), "plain");
  EXPECT_EQ(CsvEscape("a,b"), "\"a,b\"");
  const std::string nasty = "say \"hi\",\nnow";
  EXPECT_EQ(ParseCsv(CsvEscape(nasty) + "\n"), (Rows{{nasty}}));
}

TEST(RecordsIoTest, EvalRecordsCsv) {
  const auto recs = ParseEvalRecordsCsv(
      "utterance_id,ref,hyp,duration_seconds\n"
      "u1,\"Hello, world\",hello world,1.5\n"
      "u2,a b,a c,2\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].id, "u1");
  EXPECT_EQ(recs[0].ref_text, "Hello, world");
  EXPECT_EQ(recs[1].duration_seconds, 2.0);
}

TEST(RecordsIoTest, EvalRecordsCsvErrors) {
  EXPECT_THROW(ParseEvalRecordsCsv("ref,hyp\na,b\n"), Error);
  EXPECT_THROW(ParseEvalRecordsCsv("ref,hyp,duration_seconds\na,b,fast\n"), Error);
  EXPECT_THROW(ParseEvalRecordsCsv("ref,hyp,duration_seconds\na,b\n"), Error);
}

TEST(RecordsIoTest, EvalRecordsJsonl) {
  const auto recs = ParseEvalRecordsJsonl(
      "{\"id\": \"x\", \"ref\": \"a b\", \"hyp\": \"a b\", \"duration_seconds\": 1}\n"
      "\n"
      "{\"ref\": \"c d\", \"hyp\": \"c\", \"duration_seconds\": 2.5}\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].id, "x");
  EXPECT_EQ(recs[1].hyp_text, "c");
  EXPECT_FALSE(recs[1].id.empty());
  EXPECT_THROW(ParseEvalRecordsJsonl("{\"ref\": \"a\"}\n"), Error);
  EXPECT_THROW(ParseEvalRecordsJsonl("not json\n"), Error);
}

TEST(RecordsIoTest, LoadPicksFormatByExtension) {
  TempDir dir("records");
  WriteFileBytes(dir.file("r.jsonl"),
                 "{\"ref\": \"a b\", \"hyp\": \"a b\", \"duration_seconds\": 1}\n");
  WriteFileBytes(dir.file("r.csv"), "ref,hyp,duration_seconds\na b,a b,1\n");
  EXPECT_EQ(LoadEvalRecords(dir.file("r.jsonl")).size(), 1u);
  EXPECT_EQ(LoadEvalRecords(dir.file("r.csv")).size(), 1u);
}

TEST(RecordsIoTest, EmbeddingSet) {
  TempDir dir("emb");
  Checkpoint c;
  c.Add("utt_b", Tensor({3}, {0, 1, 0}));
  c.Add("utt_a", Tensor({3}, {1, 0, 0}));
  WriteCheckpoint(c, dir.file("indian.safetensors"));
  EmbeddingSet s = LoadEmbeddingSet(dir.file("indian.safetensors"));
  EXPECT_EQ(s.label, "indian");
  EXPECT_EQ(s.ids, (std::vector<std::string>{"utt_a", "utt_b"}));
  c.metadata["label"] = "en-IN";
  c.Add("bad", Tensor({1, 3}, {1, 1, 1}));
  WriteCheckpoint(c, dir.file("x.safetensors"));
  EXPECT_THROW(LoadEmbeddingSet(dir.file("x.safetensors")), Error);
}

TEST(RecordsIoTest, ScoreTableAggregation) {
  const auto rows = ParseScoreTable(
      "utterance_id,metric_name,value\n"
      "u1,utmos,4\n"
      "u2,utmos,2\n"
      "u1,accent_prob,0.5\n");
  ASSERT_EQ(rows.size(), 3u);
  const auto summary = AggregateScores(rows);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0].metric, "accent_prob");
  EXPECT_EQ(summary[1].metric, "utmos");
  EXPECT_EQ(summary[1].count, 2u);
  EXPECT_EQ(summary[1].mean, 3.0);
  EXPECT_EQ(summary[1].stddev, 1.0);
  EXPECT_EQ(summary[1].min, 2.0);
  EXPECT_EQ(summary[1].max, 4.0);
  EXPECT_THROW(ParseScoreTable("utterance_id,metric_name,value\nu,m\n"), Error);
  EXPECT_THROW(ParseScoreTable("utterance_id,metric_name,value\nu,m,high\n"), Error);
}

}  // namespace
}  // namespace vecforge
