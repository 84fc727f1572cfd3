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

#ifndef VECFORGE_CHECKPOINT_H_
#define VECFORGE_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "vecforge/tensor.h"

namespace vecforge {

// Reserved header key carrying string-to-string metadata.
inline constexpr std::string_view kMetadataKey = "__metadata__";

// Named tensors plus free-form metadata. std::map keeps iteration
// lexicographic by name, which is also the on-disk packing order.
struct Checkpoint {
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::string> metadata;

  // Throws FormatError for an empty, reserved or duplicate name.
  void Add(std::string name, Tensor tensor);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors.contains(name); }
  std::size_t ParameterCount() const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Container layout: u64 little-endian header length N, N bytes of JSON
// {name: {dtype, shape, data_offsets}, "__metadata__": {...}}, then the
// little-endian data region. Serialization is canonical: sorted keys,
// compact JSON padded with spaces to a multiple of 8 bytes, tensors packed
// in name order.
std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint ParseCheckpoint(std::string_view bytes);

Checkpoint ReadCheckpoint(const std::filesystem::path& path);
void WriteCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

// "sha256:<hex>" over the canonical serialization of the tensors alone.
// Metadata is excluded so that relabelling a checkpoint keeps it
// recognisable as the same base model.
std::string Fingerprint(const Checkpoint& ckpt);

// Whole-file helpers shared by the readers.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace vecforge

#endif  // VECFORGE_CHECKPOINT_H_
