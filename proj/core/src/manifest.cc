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

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vecforge/checkpoint.h"
#include "vecforge/error.h"

namespace vecforge {

using nlohmann::json;

std::string_view VectorKindName(VectorKind kind) {
  return kind == VectorKind::kLora ? "lora" : "full_delta";
}

VectorKind ParseVectorKind(std::string_view name) {
  if (name == "full_delta") return VectorKind::kFullDelta;
  if (name == "lora") return VectorKind::kLora;
  throw Error(ErrorCode::kConfigError, fmt::format("unknown vector kind '{}'", name));
}

VectorManifest VectorManifest::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormatError, fmt::format("manifest is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorCode::kFormatError, "manifest needs an 'entries' array");
  }
  VectorManifest manifest;
  for (const json& e : doc["entries"]) {
    try {
      manifest.Add({e.at("vector_id").get<std::string>(), e.at("path").get<std::string>(),
                    ParseVectorKind(e.at("kind").get<std::string>()),
                    e.at("base_fingerprint").get<std::string>(), e.value("label", "")});
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kFormatError, fmt::format("bad manifest entry: {}", ex.what()));
    }
  }
  return manifest;
}

VectorManifest VectorManifest::Load(const std::filesystem::path& path) {
  VectorManifest manifest = FromJson(ReadFileBytes(path));
  manifest.root_ = path.parent_path();
  return manifest;
}

std::string VectorManifest::ToJson() const {
  json entries = json::array();
  for (const ManifestEntry& e : entries_) {
    entries.push_back({{"vector_id", e.vector_id},
                       {"path", e.path},
                       {"kind", VectorKindName(e.kind)},
                       {"base_fingerprint", e.base_fingerprint},
                       {"label", e.label}});
  }
  return json{{"entries", entries}}.dump(2) + "\n";
}

void VectorManifest::Save(const std::filesystem::path& path) const {
  WriteFileBytes(path, ToJson());
}

void VectorManifest::Add(ManifestEntry entry) {
  if (entry.vector_id.empty() || entry.base_fingerprint.empty()) {
    throw Error(ErrorCode::kConfigError, "manifest entries need a vector_id and base_fingerprint");
  }
  if (Find(entry.vector_id) != nullptr) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("duplicate vector_id '{}' in manifest", entry.vector_id));
  }
  entries_.push_back(std::move(entry));
}

void VectorManifest::Upsert(ManifestEntry entry) {
  for (ManifestEntry& e : entries_) {
    if (e.vector_id == entry.vector_id) {
      if (entry.base_fingerprint.empty()) {
        throw Error(ErrorCode::kConfigError, "manifest entries need a base_fingerprint");
      }
      e = std::move(entry);
      return;
    }
  }
  Add(std::move(entry));
}

const ManifestEntry* VectorManifest::Find(std::string_view vector_id) const {
  for (const ManifestEntry& e : entries_) {
    if (e.vector_id == vector_id) return &e;
  }
  return nullptr;
}

std::filesystem::path VectorManifest::Resolve(const ManifestEntry& entry) const {
  std::filesystem::path p(entry.path);
  return p.is_absolute() ? p : root_ / p;
}

}  // namespace vecforge
