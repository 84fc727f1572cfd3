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

#ifndef VECFORGE_MANIFEST_H_
#define VECFORGE_MANIFEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vecforge {

enum class VectorKind { kFullDelta, kLora };

std::string_view VectorKindName(VectorKind kind);
VectorKind ParseVectorKind(std::string_view name);

struct ManifestEntry {
  std::string vector_id;
  std::string path;
  VectorKind kind = VectorKind::kFullDelta;
  std::string base_fingerprint;
  std::string label;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Registry of named task vectors, persisted as a human-editable
// `vectors.json`:
//   {"entries": [{"vector_id", "path", "kind", "base_fingerprint", "label"}]}
// Relative paths resolve against the manifest's directory.
class VectorManifest {
 public:
  static VectorManifest Load(const std::filesystem::path& path);
  static VectorManifest FromJson(std::string_view text);

  std::string ToJson() const;
  void Save(const std::filesystem::path& path) const;

  // Throws ConfigError for a duplicate id or an empty id/fingerprint.
  void Add(ManifestEntry entry);
  // Replaces an existing entry with the same id, or appends.
  void Upsert(ManifestEntry entry);
  const ManifestEntry* Find(std::string_view vector_id) const;
  const std::vector<ManifestEntry>& entries() const { return entries_; }

  // Absolute location of an entry's file.
  std::filesystem::path Resolve(const ManifestEntry& entry) const;

 private:
  std::vector<ManifestEntry> entries_;
  std::filesystem::path root_;
};

}  // namespace vecforge

#endif  // VECFORGE_MANIFEST_H_
