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

#include "vecforge/manifest.h"

#include "gtest/gtest.h"
#include "test_util.h"
#include "vecforge/checkpoint.h"
#include "vecforge/error.h"

namespace vecforge {
namespace {

using ::vecforge::testing::TempDir;

TEST(ManifestTest, SaveLoadRoundTrip) {
  TempDir dir("manifest");
  VectorManifest m;
  m.Add({"accent_a", "vectors/a.safetensors", VectorKind::kFullDelta, "sha256:01", "A"});
  m.Add({"accent_b", "/abs/b.safetensors", VectorKind::kLora, "sha256:02", ""});
  m.Save(dir.file("vectors.json"));
  const VectorManifest back = VectorManifest::Load(dir.file("vectors.json"));
  EXPECT_EQ(back.entries(), m.entries());
  EXPECT_EQ(back.Resolve(*back.Find("accent_a")), dir.path() / "vectors/a.safetensors");
  EXPECT_EQ(back.Resolve(*back.Find("accent_b")), "/abs/b.safetensors");
  EXPECT_EQ(back.Find("missing"), nullptr);
}

TEST(ManifestTest, JsonIsHumanEditable) {
  const VectorManifest m = VectorManifest::FromJson(R"({"entries": [
      {"vector_id": "v", "path": "v.st", "kind": "lora",
       "base_fingerprint": "sha256:ff", "label": "x"}]})");
  ASSERT_EQ(m.entries().size(), 1u);
  EXPECT_EQ(m.entries()[0].kind, VectorKind::kLora);
  EXPECT_EQ(VectorManifest::FromJson(m.ToJson()).entries(), m.entries());
}

TEST(ManifestTest, RejectsDuplicatesAndEmptyFields) {
  VectorManifest m;
  m.Add({"v", "p", VectorKind::kFullDelta, "sha256:1", ""});
  EXPECT_THROW(m.Add({"v", "q", VectorKind::kFullDelta, "sha256:1", ""}), Error);
  EXPECT_THROW(m.Add({"", "q", VectorKind::kFullDelta, "sha256:1", ""}), Error);
  EXPECT_THROW(m.Add({"w", "q", VectorKind::kFullDelta, "", ""}), Error);
  m.Upsert({"v", "q", VectorKind::kLora, "sha256:2", "new"});
  EXPECT_EQ(m.entries().size(), 1u);
  EXPECT_EQ(m.Find("v")->path, "q");
}

TEST(ManifestTest, BadKindAndBadJson) {
  EXPECT_THROW(ParseVectorKind("dense"), Error);
  EXPECT_THROW(VectorManifest::FromJson("{"), Error);
  EXPECT_THROW(VectorManifest::FromJson(R"({"entries": 3})"), Error);
}

TEST(ManifestTest, MissingFileIsIoError) {
  try {
    VectorManifest::Load("/nonexistent/vectors.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_io());
  }
}

}  // namespace
}  // namespace vecforge
