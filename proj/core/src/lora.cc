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

#include "vecforge/lora.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vecforge/error.h"
#include "vecforge/format.h"

namespace vecforge {

namespace {

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::size_t LoraAdapter::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& [name, layer] : layers) n += rank * (layer.in_dim() + layer.out_dim());
  return n;
}

void LoraAdapter::Validate() const {
  if (rank == 0) throw Error(ErrorCode::kRankError, "rank must be positive");
  if (!(lora_alpha > 0.0) || !std::isfinite(lora_alpha)) {
    throw Error(ErrorCode::kConfigError, fmt::format("lora_alpha {} must be positive", lora_alpha));
  }
  for (const auto& [name, layer] : layers) {
    if (layer.a.rank() != 2 || layer.b.rank() != 2) {
      throw Error(ErrorCode::kRankError, fmt::format("'{}': factors must be matrices", name));
    }
    if (layer.a.shape()[0] != rank || layer.b.shape()[1] != rank) {
      throw Error(ErrorCode::kRankError,
                  fmt::format("'{}': declared rank {} but A is {} and B is {}", name, rank,
                              ShapeString(layer.a.shape()), ShapeString(layer.b.shape())));
    }
    if (rank > std::min(layer.in_dim(), layer.out_dim())) {
      throw Error(ErrorCode::kRankError,
                  fmt::format("'{}': rank {} exceeds min(in={}, out={})", name, rank,
                              layer.in_dim(), layer.out_dim()));
    }
  }
}

LoraAdapter AdapterFromCheckpoint(const Checkpoint& ckpt) {
  std::map<std::string, const Tensor*> a_factors;
  std::map<std::string, const Tensor*> b_factors;
  for (const auto& [name, t] : ckpt.tensors) {
    if (EndsWith(name, kLoraASuffix)) {
      a_factors[name.substr(0, name.size() - kLoraASuffix.size())] = &t;
    } else if (EndsWith(name, kLoraBSuffix)) {
      b_factors[name.substr(0, name.size() - kLoraBSuffix.size())] = &t;
    } else {
      throw Error(ErrorCode::kFormatError,
                  fmt::format("'{}' is not a {} or {} factor", name, kLoraASuffix, kLoraBSuffix));
    }
  }

  LoraAdapter adapter;
  for (const auto& [layer, a] : a_factors) {
    auto it = b_factors.find(layer);
    if (it == b_factors.end()) {
      throw Error(ErrorCode::kPairingError,
                  fmt::format("'{}{}' has no matching {}", layer, kLoraASuffix, kLoraBSuffix));
    }
    adapter.layers.emplace(layer, LoraLayer{*a, *it->second});
  }
  for (const auto& [layer, b] : b_factors) {
    if (!a_factors.contains(layer)) {
      throw Error(ErrorCode::kPairingError,
                  fmt::format("'{}{}' has no matching {}", layer, kLoraBSuffix, kLoraASuffix));
    }
  }

  adapter.metadata = ckpt.metadata;
  auto rank_it = adapter.metadata.find("rank");
  auto alpha_it = adapter.metadata.find("lora_alpha");
  if (rank_it == adapter.metadata.end() || alpha_it == adapter.metadata.end()) {
    throw Error(ErrorCode::kFormatError, "adapter metadata needs 'rank' and 'lora_alpha'");
  }
  try {
    adapter.rank = ParseUnsigned(rank_it->second, "rank");
    adapter.lora_alpha = ParseDouble(alpha_it->second, "lora_alpha");
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  adapter.metadata.erase("rank");
  adapter.metadata.erase("lora_alpha");
  adapter.Validate();
  return adapter;
}

Checkpoint AdapterToCheckpoint(const LoraAdapter& adapter) {
  adapter.Validate();
  Checkpoint ckpt;
  for (const auto& [layer, factors] : adapter.layers) {
    ckpt.Add(layer + std::string(kLoraASuffix), factors.a);
    ckpt.Add(layer + std::string(kLoraBSuffix), factors.b);
  }
  ckpt.metadata = adapter.metadata;
  ckpt.metadata["rank"] = std::to_string(adapter.rank);
  ckpt.metadata["lora_alpha"] = FormatDouble(adapter.lora_alpha);
  return ckpt;
}

LoraAdapter ReadLora(const std::filesystem::path& path) {
  return AdapterFromCheckpoint(ReadCheckpoint(path));
}

void WriteLora(const LoraAdapter& adapter, const std::filesystem::path& path) {
  WriteCheckpoint(AdapterToCheckpoint(adapter), path);
}

}  // namespace vecforge
