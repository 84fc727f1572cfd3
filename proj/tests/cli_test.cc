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

#include "cli.h"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gtest/gtest.h"
#include "test_util.h"
#include "vecforge/checkpoint.h"
#include "vecforge/lora.h"
#include "vecforge/records_io.h"
#include "vecforge/toy_lab.h"
#include "vecforge/vector_engine.h"

namespace vecforge {
namespace {

using ::vecforge::testing::TempDir;
using ::vecforge::testing::TestDataDir;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vecforge");
  std::ostringstream out, err;
  Result r;
  r.code = cli::Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Independent edit distance over a flat sequence.
template <typename Seq>
std::size_t Distance(const Seq& a, const Seq& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

std::vector<std::string> Tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {
    Checkpoint pre;
    pre.Add("enc.weight", Tensor({2, 2}, {1, 2, 3, 4}));
    pre.Add("enc.bias", Tensor({2}, {0.5f, -0.5f}));
    Checkpoint ft = pre;
    ft.tensors.erase("enc.weight");
    ft.Add("enc.weight", Tensor({2, 2}, {1.5f, 2, 2, 4.25f}));
    WriteCheckpoint(pre, path("pre.safetensors"));
    WriteCheckpoint(ft, path("ft.safetensors"));
  }

  std::string path(const std::string& name) const { return dir_.file(name); }

  TempDir dir_;
};

TEST_F(CliTest, ExtractIdenticalGivesZeroVector) {
  const Result r = Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
                        path("pre.safetensors"), "--out", path("zero.vec")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Result inspect = Cli({"inspect", "--vector", path("zero.vec")});
  ASSERT_EQ(inspect.code, 0);
  for (const auto& [name, t] : ReadTaskVector(path("zero.vec")).deltas) {
    EXPECT_EQ(ComputeStats(t).l2_norm, 0.0) << name;
  }
}

TEST_F(CliTest, ExtractWritesTaskVectorWithProvenance) {
  ASSERT_EQ(Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
                 path("ft.safetensors"), "--out", path("v.vec"), "--id", "accent"})
                .code,
            0);
  const Checkpoint raw = ReadCheckpoint(path("v.vec"));
  EXPECT_EQ(raw.metadata.at("kind"), "task_vector");
  EXPECT_EQ(raw.metadata.at("base_fingerprint"),
            Fingerprint(ReadCheckpoint(path("pre.safetensors"))));
  EXPECT_EQ(ReadTaskVector(path("v.vec")).provenance.vector_id, "accent");
  EXPECT_EQ(ReadTaskVector(path("v.vec")).deltas.at("enc.weight").at(1, 0), -1.0f);
}

TEST_F(CliTest, ExtractKeyMismatchListsKeys) {
  Checkpoint other;
  other.Add("dec.weight", Tensor({1}, {1}));
  WriteCheckpoint(other, path("other.safetensors"));
  const Result r = Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
                        path("other.safetensors"), "--out", path("v.vec")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_TRUE(Contains(r.err, "KeySetMismatch"));
  EXPECT_TRUE(Contains(r.err, "dec.weight"));
  EXPECT_TRUE(Contains(r.err, "enc.bias"));
}

TEST_F(CliTest, MergeAlphaZeroIsBase) {
  Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
       path("ft.safetensors"), "--out", path("v.vec")});
  const Result r = Cli({"merge", "--base", path("pre.safetensors"), "--vector", path("v.vec"),
                        "--alpha", "0", "--out", path("m.safetensors")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadCheckpoint(path("m.safetensors")), ReadCheckpoint(path("pre.safetensors")));
}

TEST_F(CliTest, MergeTwoVectorsHalfEach) {
  Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
       path("ft.safetensors"), "--out", path("v.vec")});
  const Result r = Cli({"merge", "--base", path("pre.safetensors"), "--vector", path("v.vec"),
                        path("v.vec"), "--alpha", "0.5", "0.5", "--out", path("m.safetensors")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadCheckpoint(path("m.safetensors")).at("enc.weight"),
            ReadCheckpoint(path("ft.safetensors")).at("enc.weight"));
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, MergeExtrapolationWarns) {
  Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
       path("ft.safetensors"), "--out", path("v.vec")});
  Result r = Cli({"merge", "--base", path("pre.safetensors"), "--vector", path("v.vec"),
                  "--alpha", "1.5", "--out", path("m.safetensors")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty());
  r = Cli({"merge", "--base", path("pre.safetensors"), "--vector", path("v.vec"), "--alpha",
           "-1", "--out", path("m.safetensors")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(Contains(r.err, "extrapolation"));
  r = Cli({"merge", "--base", path("pre.safetensors"), "--vector", path("v.vec"), "--alpha",
           "2.5", "--out", path("m.safetensors")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(Contains(r.err, "extrapolation"));
  EXPECT_EQ(ReadCheckpoint(path("m.safetensors")).at("enc.weight").at(0, 0), 2.25f);
}

TEST_F(CliTest, MergeRejectsForeignBaseUnlessForced) {
  Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
       path("ft.safetensors"), "--out", path("v.vec")});
  Result r = Cli({"merge", "--base", path("ft.safetensors"), "--vector", path("v.vec"),
                  "--alpha", "1", "--out", path("m.safetensors")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_TRUE(Contains(r.err, "BaseMismatch"));
  r = Cli({"merge", "--base", path("ft.safetensors"), "--vector", path("v.vec"), "--alpha", "1",
           "--out", path("m.safetensors"), "--force"});
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MergeByManifestId) {
  Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
       path("ft.safetensors"), "--out", path("v.vec")});
  Result r = Cli({"manifest", "add", "--manifest", path("vectors.json"), "--id", "accent_a",
                  "--path", "v.vec", "--label", "accent A"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = Cli({"manifest", "list", "--manifest", path("vectors.json")});
  EXPECT_TRUE(Contains(r.out, "accent_a\tfull_delta\taccent A"));
  r = Cli({"merge", "--base", path("pre.safetensors"), "--manifest", path("vectors.json"),
           "--vector", "accent_a", "--alpha", "1", "--out", path("m.safetensors")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadCheckpoint(path("m.safetensors")).at("enc.weight"),
            ReadCheckpoint(path("ft.safetensors")).at("enc.weight"));
}

TEST_F(CliTest, LoraExpandGoldenFixture) {
  const Result r = Cli({"lora-expand", "--adapter",
                        (TestDataDir() / "lora_rank1.safetensors").string(), "--out",
                        path("l.vec")});
  ASSERT_EQ(r.code, 0) << r.err;
  const TaskVector v = ReadTaskVector(path("l.vec"));
  const Tensor& d = v.deltas.at("fc");
  EXPECT_EQ(std::vector<float>(d.data().begin(), d.data().end()),
            (std::vector<float>{2, 2, 4, 4}));
}

TEST_F(CliTest, LoraExpandZeroA) {
  LoraAdapter a;
  a.rank = 1;
  a.lora_alpha = 1;
  a.layers.emplace("enc.weight", LoraLayer{Tensor::Zeros({1, 2}), Tensor({2, 1}, {3, 4})});
  WriteLora(a, path("a.lora"));
  ASSERT_EQ(Cli({"lora-expand", "--adapter", path("a.lora"), "--out", path("l.vec"), "--base",
                 path("pre.safetensors")})
                .code,
            0);
  const TaskVector v = ReadTaskVector(path("l.vec"));
  EXPECT_EQ(ComputeStats(v.deltas.at("enc.weight")).l2_norm, 0.0);
  EXPECT_EQ(v.provenance.base_fingerprint, Fingerprint(ReadCheckpoint(path("pre.safetensors"))));
}

TEST_F(CliTest, LoraExpandUnpaired) {
  Checkpoint c;
  c.Add("enc.fc.lora_A", Tensor::Zeros({1, 2}));
  c.metadata = {{"rank", "1"}, {"lora_alpha", "1"}};
  WriteCheckpoint(c, path("bad.lora"));
  const Result r = Cli({"lora-expand", "--adapter", path("bad.lora"), "--out", path("l.vec")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_TRUE(Contains(r.err, "PairingError"));
}

TEST_F(CliTest, ToyPipelineAndSweep) {
  ASSERT_EQ(Cli({"toy", "init", "--out", path("base.st"), "--width", "8"}).code, 0);
  for (const char* task : {"rotate:30", "rotate:-30"}) {
    const std::string name = std::string(task) == "rotate:30" ? "a" : "b";
    ASSERT_EQ(Cli({"toy", "train", "--base", path("base.st"), "--task", task, "--rank", "4",
                   "--steps", "200", "--out", path(name + ".lora")})
                  .code,
              0);
    ASSERT_EQ(Cli({"lora-expand", "--adapter", path(name + ".lora"), "--out",
                   path(name + ".vec")})
                  .code,
              0);
  }
  Result r = Cli({"sweep", "--base", path("base.st"), "--vector", path("a.vec"), "--grid",
                  "0:1:0.2", "--task", "rotate:30", "--samples", "256", "--out", path("s.csv"),
                  "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = ParseCsv(ReadFileBytes(path("s.csv")));
  ASSERT_EQ(rows.size(), 7u);
  const std::vector<std::string> alphas{"0", "0.2", "0.4", "0.6", "0.8", "1"};
  for (std::size_t i = 0; i < alphas.size(); ++i) EXPECT_EQ(rows[i + 1][0], alphas[i]);
  EXPECT_TRUE(std::filesystem::exists(path("s.json")));

  // The alpha = 0 row is the base model's own metric.
  r = Cli({"toy", "eval", "--model", path("base.st"), "--task", "rotate:30", "--samples", "256"});
  EXPECT_EQ(std::stod(r.out.substr(4)), std::stod(rows[1][2]));

  // Mix-mode endpoints reproduce single-vector merges.
  r = Cli({"sweep", "--base", path("base.st"), "--vector", path("a.vec"), "--vector2",
           path("b.vec"), "--grid", "0:1:1", "--task", "rotate:30", "--task2", "rotate:-30",
           "--samples", "256", "--out", path("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto mix = ParseCsv(ReadFileBytes(path("m.csv")));
  for (const auto& [row, vec] : {std::pair{1, "b.vec"}, std::pair{2, "a.vec"}}) {
    ASSERT_EQ(Cli({"merge", "--base", path("base.st"), "--vector", path(vec), "--alpha", "1",
                   "--out", path("merged.st")})
                  .code,
              0);
    r = Cli({"toy", "eval", "--model", path("merged.st"), "--task", "rotate:30", "--samples",
             "256"});
    EXPECT_NEAR(std::stod(r.out.substr(4)), std::stod(mix[row][2]), 1e-6) << vec;
  }
}

TEST_F(CliTest, ToyTrainIsDeterministic) {
  ASSERT_EQ(Cli({"toy", "init", "--out", path("base.st"), "--width", "8"}).code, 0);
  const auto train = [&](const std::string& out) {
    return Cli({"toy", "train", "--base", path("base.st"), "--task", "scale", "--rank", "4",
                "--steps", "50", "--seed", "3", "--out", path(out)});
  };
  const Result a = train("a.lora");
  const Result b = train("b.lora");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out.substr(a.out.find("fingerprint")), b.out.substr(b.out.find("fingerprint")));
  EXPECT_EQ(ReadFileBytes(path("a.lora")), ReadFileBytes(path("b.lora")));
}

TEST_F(CliTest, ToyEvalUntrainedBaseline) {
  ASSERT_EQ(Cli({"toy", "init", "--out", path("base.st")}).code, 0);
  const Result r = Cli({"toy", "eval", "--model", path("base.st"), "--task", "rotate:30"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "mse 9.911471567428867\n");
}

TEST_F(CliTest, ToyGradcheck) {
  const Result r = Cli({"toy", "gradcheck"});
  EXPECT_EQ(r.code, 0);
  ASSERT_TRUE(Contains(r.out, "max relative gradient error "));
  const double err = std::stod(r.out.substr(r.out.find("error ") + 6));
  EXPECT_LT(err, 1e-5);
}

TEST_F(CliTest, EvalIdenticalPairs) {
  WriteFileBytes(path("same.jsonl"),
                 "{\"ref\": \"the cat sat\", \"hyp\": \"The cat sat.\", \"duration_seconds\": 2}\n"
                 "{\"ref\": \"a dog ran\", \"hyp\": \"a dog ran\", \"duration_seconds\": 1}\n");
  for (const char* metric : {"wer", "cer"}) {
    const Result r = Cli({"eval", metric, "--records", path("same.jsonl")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)[metric], 0.0);
  }
}

TEST_F(CliTest, EvalFixtureCorpusMatchesOracle) {
  const std::string corpus = (TestDataDir() / "eval_corpus.csv").string();
  // Normalized kept records, written out by hand.
  const std::vector<std::pair<std::string, std::string>> kept{
      {"the cat sat on the mat", "the cat sat on a mat"},
      {"hello there friend", "hello their friend"}};
  std::size_t word_edits = 0, word_len = 0, char_edits = 0, char_len = 0;
  for (const auto& [ref, hyp] : kept) {
    word_edits += Distance(Tokens(ref), Tokens(hyp));
    word_len += Tokens(ref).size();
    char_edits += Distance(ref, hyp);
    char_len += ref.size();
  }
  Result r = Cli({"eval", "wer", "--records", corpus});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(doc["wer"].get<double>(), static_cast<double>(word_edits) / word_len);
  EXPECT_EQ(doc["kept"], 2);
  r = Cli({"eval", "cer", "--records", corpus});
  doc = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(doc["cer"].get<double>(), static_cast<double>(char_edits) / char_len);

  const auto& rejected = doc["rejected"];
  ASSERT_EQ(rejected.size(), 2u);
  EXPECT_EQ(rejected[0]["id"], "u3");
  EXPECT_EQ(rejected[0]["rules"][0], "min_reference_words");
  EXPECT_EQ(rejected[1]["id"], "u4");
  EXPECT_EQ(rejected[1]["rules"][0], "word_rate");
}

TEST_F(CliTest, EvalSimilarityAndScores) {
  Checkpoint ref;
  ref.Add("u1", Tensor({2}, {1, 0}));
  ref.Add("u2", Tensor({2}, {0, 1}));
  WriteCheckpoint(ref, path("ref.st"));
  Checkpoint syn;
  syn.Add("u1", Tensor({2}, {1, 1}));
  WriteCheckpoint(syn, path("syn.st"));
  Result r = Cli({"eval", "accent-sim", "--sample", path("syn.st"), "--reference", path("ref.st")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["mean"].get<double>(), 1.0, 1e-12);
  r = Cli({"eval", "speaker-sim", "--reference", path("ref.st"), "--synth", path("syn.st")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["per_utterance"]["u1"].get<double>(),
              1 / std::sqrt(2.0), 1e-7);
  WriteFileBytes(path("scores.csv"), "utterance_id,metric_name,value\na,utmos,3\nb,utmos,5\n");
  r = Cli({"eval", "scores", "--table", path("scores.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)[0]["mean"], 4.0);
}

TEST_F(CliTest, InspectCheckpoint) {
  const Result r = Cli({"inspect", "--checkpoint", path("pre.safetensors")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(Contains(r.out, "l2_norm"));
  EXPECT_TRUE(Contains(r.out, "enc.weight"));
  EXPECT_TRUE(Contains(r.out, "[2, 2]"));
  EXPECT_TRUE(Contains(r.out, "F32"));
  EXPECT_TRUE(Contains(r.out, "5.47723"));  // sqrt(30)
}

TEST_F(CliTest, InspectVectorShowsProvenance) {
  Cli({"extract", "--pretrained", path("pre.safetensors"), "--finetuned",
       path("ft.safetensors"), "--out", path("v.vec"), "--id", "accent"});
  const Result r = Cli({"inspect", "--vector", path("v.vec")});
  ASSERT_EQ(r.code, 0);
  const Checkpoint raw = ReadCheckpoint(path("v.vec"));
  EXPECT_TRUE(Contains(r.out, "base_fingerprint " + raw.metadata.at("base_fingerprint")));
  EXPECT_TRUE(Contains(r.out, "source " + raw.metadata.at("source")));
  EXPECT_TRUE(Contains(r.out, "vector_id accent"));
}

TEST_F(CliTest, InspectTruncatedFile) {
  const std::string bytes = ReadFileBytes(path("pre.safetensors"));
  WriteFileBytes(path("trunc.st"), bytes.substr(0, bytes.size() / 2));
  const Result r = Cli({"inspect", "--checkpoint", path("trunc.st")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_TRUE(Contains(r.err, "FormatError"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({"inspect", "--checkpoint", path("missing.st")}).code, cli::kExitIo);
  EXPECT_EQ(Cli({"frobnicate"}).code, cli::kExitValidation);
  EXPECT_EQ(Cli({"merge", "--base", path("pre.safetensors")}).code, cli::kExitValidation);
  EXPECT_EQ(Cli({"sweep", "--base", path("pre.safetensors"), "--vector", path("x"), "--grid",
                 "0:1:0", "--task", "identity", "--out", path("s.csv")})
                .code,
            cli::kExitValidation);
  EXPECT_EQ(Cli({"--help"}).code, cli::kExitOk);
}

}  // namespace
}  // namespace vecforge
