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

#include "vecforge/vector_engine.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"
#include "vecforge/error.h"

namespace vecforge {
namespace {

using ::vecforge::testing::RandomCheckpointPair;
using ::vecforge::testing::TempDir;
using ::vecforge::testing::UlpsAtScale;

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kConfigError;
}

Checkpoint One(const std::string& name, std::vector<float> v) {
  Checkpoint c;
  const std::size_t n = v.size();
  c.Add(name, Tensor({n}, std::move(v)));
  return c;
}

TaskVector Vector(std::vector<float> v, const std::string& base_fp = "sha256:base") {
  TaskVector out;
  const std::size_t n = v.size();
  out.deltas.emplace("w", Tensor({n}, std::move(v)));
  out.provenance.base_fingerprint = base_fp;
  return out;
}

TEST(VectorEngineTest, ExtractSelfIsZero) {
  Rng rng(1);
  const auto pair = RandomCheckpointPair(rng, 3, 3, 100);
  const TaskVector v = ExtractVector(pair.pre, pair.pre);
  for (const auto& [name, d] : v.deltas) EXPECT_EQ(ComputeStats(d).l2_norm, 0.0) << name;
  EXPECT_EQ(v.provenance.base_fingerprint, Fingerprint(pair.pre));
  EXPECT_EQ(v.provenance.source, VectorSource::kExtracted);
}

TEST(VectorEngineTest, ExtractExactDifference) {
  const TaskVector v = ExtractVector(One("w", {1.5f, 1.0f}), One("w", {1.0f, 2.0f}));
  const Tensor& d = v.deltas.at("w");
  EXPECT_EQ(d.data()[0], 0.5f);
  EXPECT_EQ(d.data()[1], -1.0f);
}

TEST(VectorEngineTest, ExtractMatches64BitOracle) {
  Rng rng(2);
  const auto pair = RandomCheckpointPair(rng, 3, 3, 2000);
  const TaskVector v = ExtractVector(pair.ft, pair.pre);
  for (const auto& [name, d] : v.deltas) {
    const auto ft = pair.ft.at(name).data();
    const auto pre = pair.pre.at(name).data();
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double want = static_cast<double>(ft[i]) - pre[i];
      EXPECT_LE(UlpsAtScale(d.data()[i], want, want), 1.0) << name << "[" << i << "]";
    }
  }
}

TEST(VectorEngineTest, ExtractKeySetMismatchListsKeys) {
  Checkpoint a = One("w", {1});
  a.Add("only_ft", Tensor({1}, {1}));
  Checkpoint b = One("w", {1});
  b.Add("only_pre", Tensor({1}, {1}));
  try {
    ExtractVector(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKeySetMismatch);
    EXPECT_NE(std::string(e.what()).find("only_ft"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("only_pre"), std::string::npos);
  }
}

TEST(VectorEngineTest, ExtractShapeMismatchNamesKey) {
  try {
    ExtractVector(One("w", {1, 2}), One("w", {1, 2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    EXPECT_NE(std::string(e.what()).find("'w'"), std::string::npos);
  }
}

TEST(VectorEngineTest, ScaleVector) {
  const TaskVector v = Vector({2, -4});
  const TaskVector half = ScaleVector(v, 0.5);
  EXPECT_EQ(half.deltas.at("w").data()[0], 1.0f);
  EXPECT_EQ(half.deltas.at("w").data()[1], -2.0f);
  EXPECT_EQ(half.provenance.scale, 0.5);
  EXPECT_EQ(ComputeStats(ScaleVector(v, 0).deltas.at("w")).l2_norm, 0.0);
  EXPECT_EQ(CodeOf([&] { ScaleVector(v, NAN); }), ErrorCode::kNonFiniteCoefficient);
}

TEST(VectorEngineTest, ComposeCancellation) {
  const TaskVector v = Vector({1.25f, -3, 7});
  const TaskVector neg = ScaleVector(v, -1);
  const std::vector<TaskVector> vs{v, neg};
  const std::vector<double> cs{0.5, 0.5};
  EXPECT_EQ(ComputeStats(Compose(vs, cs).deltas.at("w")).l2_norm, 0.0);
}

TEST(VectorEngineTest, ComposeSingleEqualsScale) {
  const TaskVector v = Vector({0.1f, -0.3f, 1e-7f});
  const std::vector<TaskVector> vs{v};
  const std::vector<double> cs{0.7};
  EXPECT_TRUE(BitEqual(Compose(vs, cs).deltas.at("w"), ScaleVector(v, 0.7).deltas.at("w")));
}

TEST(VectorEngineTest, ComposePermutation) {
  Rng rng(4);
  const TaskVector a = Vector(testing::RandomValues(rng, 500, -1, 1));
  const TaskVector b = Vector(testing::RandomValues(rng, 500, -1, 1));
  const std::vector<TaskVector> ab{a, b}, ba{b, a};
  const std::vector<double> c1{0.3, 0.9}, c2{0.9, 0.3};
  const Tensor x = Compose(ab, c1).deltas.at("w");
  const Tensor y = Compose(ba, c2).deltas.at("w");
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_LE(UlpsAtScale(x.data()[i], y.data()[i], y.data()[i]), 1.0);
  }
}

TEST(VectorEngineTest, ComposeUnionOfKeysAndProvenance) {
  TaskVector a = Vector({1, 1});
  a.provenance.vector_id = "a";
  TaskVector b;
  b.provenance.base_fingerprint = "sha256:base";
  b.deltas.emplace("u", Tensor({1}, {4}));
  const std::vector<TaskVector> vs{a, b};
  const std::vector<double> cs{2, 0.5};
  const TaskVector c = Compose(vs, cs);
  EXPECT_EQ(c.deltas.at("w").data()[0], 2.0f);
  EXPECT_EQ(c.deltas.at("u").data()[0], 2.0f);
  EXPECT_EQ(c.provenance.source, VectorSource::kComposed);
  ASSERT_EQ(c.provenance.components.size(), 2u);
  EXPECT_EQ(c.provenance.components[0], (std::pair<std::string, double>{"a", 2}));
  EXPECT_EQ(c.provenance.components[1].first, "v1");
}

TEST(VectorEngineTest, ComposeValidation) {
  const std::vector<TaskVector> vs{Vector({1}), Vector({1}, "sha256:other")};
  const std::vector<double> two{0.5, 0.5}, one{1};
  EXPECT_EQ(CodeOf([&] { Compose(vs, one); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([&] { Compose(vs, two); }), ErrorCode::kBaseMismatch);
  const std::vector<double> bad{0.5, INFINITY};
  const std::vector<TaskVector> same{Vector({1}), Vector({1})};
  EXPECT_EQ(CodeOf([&] { Compose(same, bad); }), ErrorCode::kNonFiniteCoefficient);
  std::vector<std::string> warnings;
  MergeOptions force{true, [&](const std::string& w) { warnings.push_back(w); }};
  EXPECT_NO_THROW(Compose(vs, two, force));
  EXPECT_FALSE(warnings.empty());
}

TEST(VectorEngineTest, ApplyAlphaZeroKeepsFingerprint) {
  Rng rng(5);
  auto pair = RandomCheckpointPair(rng, 4, 4, 300);
  pair.pre.metadata["model"] = "base";
  const TaskVector v = ExtractVector(pair.ft, pair.pre);
  const Checkpoint out = Apply(pair.pre, v, 0.0);
  EXPECT_EQ(Fingerprint(out), Fingerprint(pair.pre));
  EXPECT_EQ(SerializeCheckpoint(out), SerializeCheckpoint(pair.pre));
}

TEST(VectorEngineTest, ApplyRoundTripWithinOneUlp) {
  Rng rng(6);
  const auto pair = RandomCheckpointPair(rng, 5, 5, 1000);
  const Checkpoint out = Apply(pair.pre, ExtractVector(pair.ft, pair.pre), 1.0);
  for (const auto& [name, t] : out.tensors) {
    const auto want = pair.ft.at(name).data();
    const auto pre = pair.pre.at(name).data();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double scale = std::max(std::fabs(want[i]), std::fabs(pre[i]));
      EXPECT_LE(UlpsAtScale(t.data()[i], want[i], scale), 1.0) << name << "[" << i << "]";
    }
  }
}

TEST(VectorEngineTest, ApplyPassesUntouchedTensorsThrough) {
  Checkpoint base = One("w", {1, 2});
  base.Add("frozen", Tensor({1}, {-0.0f}));
  TaskVector v = Vector({1, 1}, Fingerprint(base));
  const Checkpoint out = Apply(base, v, 2.0);
  EXPECT_TRUE(BitEqual(out.at("frozen"), base.at("frozen")));
  EXPECT_EQ(out.at("w").data()[1], 4.0f);
}

TEST(VectorEngineTest, ApplyValidation) {
  const Checkpoint base = One("w", {1, 2});
  const std::string fp = Fingerprint(base);
  EXPECT_EQ(CodeOf([&] { Apply(base, Vector({1, 1}, "sha256:x"), 1); }), ErrorCode::kBaseMismatch);
  EXPECT_EQ(CodeOf([&] { Apply(base, Vector({1, 1, 1}, fp), 1); }), ErrorCode::kShapeMismatch);
  TaskVector stray = Vector({1, 1}, fp);
  stray.deltas.emplace("nope", Tensor({1}, {1}));
  EXPECT_EQ(CodeOf([&] { Apply(base, stray, 1); }), ErrorCode::kUnknownKey);
  EXPECT_EQ(CodeOf([&] { Apply(base, stray, 0); }), ErrorCode::kUnknownKey);
  EXPECT_EQ(CodeOf([&] { Apply(base, Vector({1, 1}, fp), NAN); }),
            ErrorCode::kNonFiniteCoefficient);
  EXPECT_NO_THROW(Apply(base, Vector({1, 1}, "sha256:x"), 1, {.force = true, .warn = {}}));
}

TEST(VectorEngineTest, MixingConfigurationIsAverage) {
  const Checkpoint base = One("w", {1, 1});
  const std::string fp = Fingerprint(base);
  const std::vector<TaskVector> vs{Vector({2, 0}, fp), Vector({0, 4}, fp)};
  const std::vector<double> cs{0.5, 0.5};
  const Checkpoint out = Apply(base, Compose(vs, cs), 1.0);
  EXPECT_EQ(out.at("w").data()[0], 2.0f);
  EXPECT_EQ(out.at("w").data()[1], 3.0f);
}

TEST(VectorEngineTest, DiffReport) {
  Checkpoint a = One("w", {1, 2, 3});
  const DiffReport same = ComputeDiffReport(a, a);
  EXPECT_EQ(same.total.l2_of_delta, 0.0);
  EXPECT_EQ(same.total.relative_norm, 0.0);
  EXPECT_EQ(same.total.name, "<all>");
  const Checkpoint b = One("w", {1, 3, 3});
  const DiffReport one = ComputeDiffReport(b, a);
  ASSERT_EQ(one.tensors.size(), 1u);
  EXPECT_EQ(one.tensors[0].max_abs_delta, 1.0);
  EXPECT_DOUBLE_EQ(one.tensors[0].relative_norm, 1.0 / std::sqrt(14.0));
}

TEST(VectorEngineTest, DiffReportAgreesWithExtractedStats) {
  Rng rng(8);
  const auto pair = RandomCheckpointPair(rng, 3, 6, 500);
  const DiffReport r = ComputeDiffReport(pair.ft, pair.pre);
  const TaskVector v = ExtractVector(pair.ft, pair.pre);
  for (const TensorDiff& d : r.tensors) {
    const TensorStats s = ComputeStats(v.deltas.at(d.name));
    EXPECT_NEAR(d.l2_of_delta, s.l2_norm, 1e-6 * s.l2_norm + 1e-30);
    EXPECT_NEAR(d.max_abs_delta, s.max_abs, 1e-6 * s.max_abs + 1e-30);
  }
}

TEST(VectorEngineTest, VectorFileRoundTrip) {
  TempDir dir("vec");
  TaskVector v = Vector({0.5f, -2});
  v.provenance.vector_id = "accent";
  v.provenance.source = VectorSource::kComposed;
  v.provenance.scale = 0.25;
  v.provenance.components = {{"a", 0.5}, {"b", -0.125}};
  WriteTaskVector(v, dir.file("v.safetensors"));
  const TaskVector back = ReadTaskVector(dir.file("v.safetensors"));
  EXPECT_EQ(back.provenance, v.provenance);
  EXPECT_TRUE(BitEqual(back.deltas.at("w"), v.deltas.at("w")));
  const Checkpoint raw = ReadCheckpoint(dir.file("v.safetensors"));
  EXPECT_EQ(raw.metadata.at("kind"), "task_vector");
  EXPECT_EQ(CodeOf([] { TaskVectorFromCheckpoint(One("w", {1})); }), ErrorCode::kFormatError);
}

}  // namespace
}  // namespace vecforge
