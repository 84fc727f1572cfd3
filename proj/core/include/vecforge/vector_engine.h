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

#ifndef VECFORGE_VECTOR_ENGINE_H_
#define VECFORGE_VECTOR_ENGINE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vecforge/checkpoint.h"
#include "vecforge/lora.h"
#include "vecforge/tensor.h"

namespace vecforge {

enum class VectorSource { kExtracted, kLoraExpanded, kComposed };

std::string_view VectorSourceName(VectorSource source);

struct Provenance {
  std::string base_fingerprint;
  VectorSource source = VectorSource::kExtracted;
  // Optional caller-assigned name; used when the vector joins a composition.
  std::string vector_id;
  // Product of every scale_vector factor applied since creation.
  double scale = 1.0;
  // (vector_id, coefficient) for composed vectors, in argument order.
  std::vector<std::pair<std::string, double>> components;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// A parameter-space direction: per-tensor deltas against one base model.
struct TaskVector {
  std::map<std::string, Tensor> deltas;
  Provenance provenance;
};

struct MergeOptions {
  // Downgrades BaseMismatch to a warning.
  bool force = false;
  std::function<void(const std::string&)> warn;
};

// fine_tuned - pretrained, per tensor. Key sets and shapes must agree.
TaskVector ExtractVector(const Checkpoint& fine_tuned, const Checkpoint& pretrained);

// Expands every adapted layer to s * (B x A) with s = lora_alpha / rank.
// Layers the adapter does not touch are absent from the result.
TaskVector LoraDelta(const LoraAdapter& adapter, std::string base_fingerprint = {});

TaskVector ScaleVector(const TaskVector& v, double alpha);

// sum_i coefficients[i] * vectors[i] over the union of keys, one rounding per
// element. A key missing from a vector contributes zero.
TaskVector Compose(std::span<const TaskVector> vectors, std::span<const double> coefficients,
                   const MergeOptions& options = {});

// base + alpha * v. Tensors outside the vector pass through untouched and
// alpha == 0 returns base unchanged (after validation).
Checkpoint Apply(const Checkpoint& base, const TaskVector& v, double alpha,
                 const MergeOptions& options = {});

struct TensorDiff {
  std::string name;
  double l2_of_delta = 0.0;
  double max_abs_delta = 0.0;
  // l2_of_delta / ||b||; 0 when both are zero, +inf when only ||b|| is.
  double relative_norm = 0.0;
};

struct DiffReport {
  std::vector<TensorDiff> tensors;
  TensorDiff total;  // name "<all>"
};

// Statistics of a - b per tensor, computed in 64-bit.
DiffReport ComputeDiffReport(const Checkpoint& a, const Checkpoint& b);

// Vector files are checkpoints tagged kind=task_vector with the provenance
// serialized into metadata.
Checkpoint TaskVectorToCheckpoint(const TaskVector& v);
TaskVector TaskVectorFromCheckpoint(const Checkpoint& ckpt);
TaskVector ReadTaskVector(const std::filesystem::path& path);
void WriteTaskVector(const TaskVector& v, const std::filesystem::path& path);

}  // namespace vecforge

#endif  // VECFORGE_VECTOR_ENGINE_H_
