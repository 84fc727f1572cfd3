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

#ifndef VECFORGE_LORA_H_
#define VECFORGE_LORA_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "vecforge/checkpoint.h"
#include "vecforge/tensor.h"

namespace vecforge {

inline constexpr std::string_view kLoraASuffix = ".lora_A";
inline constexpr std::string_view kLoraBSuffix = ".lora_B";

// Low-rank factors for one base weight of shape (out x in):
// a is (rank x in), b is (out x rank).
struct LoraLayer {
  Tensor a;
  Tensor b;

  std::size_t in_dim() const { return a.shape()[1]; }
  std::size_t out_dim() const { return b.shape()[0]; }

  friend bool operator==(const LoraLayer&, const LoraLayer&) = default;
};

struct LoraAdapter {
  // Keyed by the base tensor name the update is added to.
  std::map<std::string, LoraLayer> layers;
  std::size_t rank = 0;
  double lora_alpha = 0.0;
  // Extra string metadata carried through the container (e.g. the base
  // fingerprint written by the trainer).
  std::map<std::string, std::string> metadata;

  // s = lora_alpha / rank.
  double scaling() const { return lora_alpha / static_cast<double>(rank); }
  // sum over layers of rank * (in + out).
  std::size_t ParameterCount() const;

  // Throws RankError for a zero rank, factor shapes that disagree with
  // `rank` or a rank above min(in, out); ConfigError for a non-positive alpha.
  void Validate() const;

  friend bool operator==(const LoraAdapter&, const LoraAdapter&) = default;
};

// Groups `<layer>.lora_A` / `<layer>.lora_B` tensors and reads `rank` and
// `lora_alpha` from metadata. Throws PairingError for an unmatched factor.
LoraAdapter AdapterFromCheckpoint(const Checkpoint& ckpt);
Checkpoint AdapterToCheckpoint(const LoraAdapter& adapter);

LoraAdapter ReadLora(const std::filesystem::path& path);
void WriteLora(const LoraAdapter& adapter, const std::filesystem::path& path);

}  // namespace vecforge

#endif  // VECFORGE_LORA_H_
