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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vecforge/error.h"
#include "vecforge/format.h"

namespace vecforge {

std::string_view VectorSourceName(VectorSource source) {
  switch (source) {
    case VectorSource::kExtracted: return "extracted";
    case VectorSource::kLoraExpanded: return "lora_expanded";
    case VectorSource::kComposed: return "composed";
  }
  return "extracted";
}

namespace {

VectorSource ParseVectorSource(std::string_view name) {
  if (name == "extracted") return VectorSource::kExtracted;
  if (name == "lora_expanded") return VectorSource::kLoraExpanded;
  if (name == "composed") return VectorSource::kComposed;
  throw Error(ErrorCode::kFormatError, fmt::format("unknown vector source '{}'", name));
}

void RequireSameKeys(const Checkpoint& a, const Checkpoint& b, std::string_view a_name,
                     std::string_view b_name) {
  std::vector<std::string> only_a, only_b;
  for (const auto& [k, t] : a.tensors) {
    if (!b.contains(k)) only_a.push_back(k);
  }
  for (const auto& [k, t] : b.tensors) {
    if (!a.contains(k)) only_b.push_back(k);
  }
  if (!only_a.empty() || !only_b.empty()) {
    throw Error(ErrorCode::kKeySetMismatch,
                fmt::format("only in {}: [{}]; only in {}: [{}]", a_name, fmt::join(only_a, ", "),
                            b_name, fmt::join(only_b, ", ")));
  }
}

void CheckBase(const std::string& expected, const std::string& actual,
               const MergeOptions& options) {
  if (expected == actual) return;
  const std::string msg = fmt::format("vector base {} does not match {}",
                                      expected.empty() ? "<unset>" : expected, actual);
  if (!options.force) throw Error(ErrorCode::kBaseMismatch, msg);
  if (options.warn) options.warn(msg + " (forced)");
}

}  // namespace

TaskVector ExtractVector(const Checkpoint& fine_tuned, const Checkpoint& pretrained) {
  RequireSameKeys(fine_tuned, pretrained, "fine-tuned", "pretrained");
  TaskVector v;
  for (const auto& [name, ft] : fine_tuned.tensors) {
    const Tensor& pre = pretrained.tensors.at(name);
    if (ft.shape() != pre.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  fmt::format("'{}': fine-tuned {} vs pretrained {}", name,
                              ShapeString(ft.shape()), ShapeString(pre.shape())));
    }
    v.deltas.emplace(name, Subtract(ft, pre));
  }
  v.provenance.base_fingerprint = Fingerprint(pretrained);
  v.provenance.source = VectorSource::kExtracted;
  return v;
}

TaskVector LoraDelta(const LoraAdapter& adapter, std::string base_fingerprint) {
  adapter.Validate();
  const double s = adapter.scaling();
  TaskVector v;
  for (const auto& [name, layer] : adapter.layers) {
    v.deltas.emplace(name, Matmul(layer.b, layer.a, s));
  }
  v.provenance.base_fingerprint = std::move(base_fingerprint);
  v.provenance.source = VectorSource::kLoraExpanded;
  return v;
}

TaskVector ScaleVector(const TaskVector& v, double alpha) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::kNonFiniteCoefficient, fmt::format("alpha {}", alpha));
  }
  TaskVector out;
  out.provenance = v.provenance;
  out.provenance.scale *= alpha;
  for (const auto& [name, t] : v.deltas) out.deltas.emplace(name, Scale(t, alpha));
  return out;
}

TaskVector Compose(std::span<const TaskVector> vectors, std::span<const double> coefficients,
                   const MergeOptions& options) {
  if (vectors.empty() || vectors.size() != coefficients.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} vectors and {} coefficients", vectors.size(), coefficients.size()));
  }
  for (double c : coefficients) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::kNonFiniteCoefficient, fmt::format("coefficient {}", c));
    }
  }
  const std::string& base = vectors.front().provenance.base_fingerprint;
  for (const TaskVector& v : vectors.subspan(1)) {
    CheckBase(base, v.provenance.base_fingerprint, options);
  }

  std::set<std::string> keys;
  for (const TaskVector& v : vectors) {
    for (const auto& [k, t] : v.deltas) keys.insert(k);
  }

  TaskVector out;
  out.provenance.base_fingerprint = base;
  out.provenance.source = VectorSource::kComposed;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::string& id = vectors[i].provenance.vector_id;
    out.provenance.components.emplace_back(id.empty() ? fmt::format("v{}", i) : id,
                                           coefficients[i]);
  }

  std::vector<std::pair<const Tensor*, double>> terms;
  for (const std::string& key : keys) {
    terms.clear();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      auto it = vectors[i].deltas.find(key);
      if (it != vectors[i].deltas.end()) terms.emplace_back(&it->second, coefficients[i]);
    }
    try {
      out.deltas.emplace(key, WeightedSum(terms));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kShapeMismatch) throw;
      throw Error(ErrorCode::kShapeMismatch, fmt::format("'{}': {}", key, e.what()));
    }
  }
  return out;
}

Checkpoint Apply(const Checkpoint& base, const TaskVector& v, double alpha,
                 const MergeOptions& options) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::kNonFiniteCoefficient, fmt::format("alpha {}", alpha));
  }
  CheckBase(v.provenance.base_fingerprint, Fingerprint(base), options);
  for (const auto& [name, delta] : v.deltas) {
    auto it = base.tensors.find(name);
    if (it == base.tensors.end()) {
      throw Error(ErrorCode::kUnknownKey,
                  fmt::format("vector tensor '{}' does not exist in the base", name));
    }
    if (it->second.shape() != delta.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  fmt::format("'{}': base {} vs delta {}", name, ShapeString(it->second.shape()),
                              ShapeString(delta.shape())));
    }
  }
  if (alpha == 0.0) return base;

  Checkpoint out;
  out.metadata = base.metadata;
  for (const auto& [name, w] : base.tensors) {
    auto it = v.deltas.find(name);
    out.tensors.emplace(name, it == v.deltas.end() ? w : AddScaled(w, it->second, alpha));
  }
  return out;
}

DiffReport ComputeDiffReport(const Checkpoint& a, const Checkpoint& b) {
  RequireSameKeys(a, b, "first", "second");
  DiffReport report;
  report.total.name = "<all>";
  double total_sq = 0.0, total_ref_sq = 0.0;
  auto relative = [](double delta_sq, double ref_sq) {
    if (delta_sq == 0.0) return 0.0;
    if (ref_sq == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(delta_sq / ref_sq);
  };
  for (const auto& [name, ta] : a.tensors) {
    const Tensor& tb = b.tensors.at(name);
    if (ta.shape() != tb.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  fmt::format("'{}': {} vs {}", name, ShapeString(ta.shape()),
                              ShapeString(tb.shape())));
    }
    TensorDiff d;
    d.name = name;
    double sq = 0.0, ref_sq = 0.0;
    auto da = ta.data();
    auto db = tb.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
      const double delta = static_cast<double>(da[i]) - static_cast<double>(db[i]);
      sq += delta * delta;
      ref_sq += static_cast<double>(db[i]) * db[i];
      d.max_abs_delta = std::max(d.max_abs_delta, std::fabs(delta));
    }
    d.l2_of_delta = std::sqrt(sq);
    d.relative_norm = relative(sq, ref_sq);
    total_sq += sq;
    total_ref_sq += ref_sq;
    report.total.max_abs_delta = std::max(report.total.max_abs_delta, d.max_abs_delta);
    report.tensors.push_back(std::move(d));
  }
  report.total.l2_of_delta = std::sqrt(total_sq);
  report.total.relative_norm = relative(total_sq, total_ref_sq);
  return report;
}

Checkpoint TaskVectorToCheckpoint(const TaskVector& v) {
  Checkpoint ckpt;
  for (const auto& [name, t] : v.deltas) ckpt.Add(name, t);
  const Provenance& p = v.provenance;
  ckpt.metadata["kind"] = "task_vector";
  ckpt.metadata["base_fingerprint"] = p.base_fingerprint;
  ckpt.metadata["source"] = std::string(VectorSourceName(p.source));
  ckpt.metadata["scale"] = FormatDouble(p.scale);
  if (!p.vector_id.empty()) ckpt.metadata["vector_id"] = p.vector_id;
  if (!p.components.empty()) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [id, c] : p.components) comps.push_back({id, c});
    ckpt.metadata["components"] = comps.dump();
  }
  return ckpt;
}

TaskVector TaskVectorFromCheckpoint(const Checkpoint& ckpt) {
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = ckpt.metadata.find(key);
    return it == ckpt.metadata.end() ? nullptr : &it->second;
  };
  const std::string* kind = get("kind");
  if (kind == nullptr || *kind != "task_vector") {
    throw Error(ErrorCode::kFormatError, "file is not tagged kind=task_vector");
  }
  TaskVector v;
  v.deltas = ckpt.tensors;
  Provenance& p = v.provenance;
  if (const std::string* s = get("base_fingerprint")) p.base_fingerprint = *s;
  if (const std::string* s = get("source")) p.source = ParseVectorSource(*s);
  if (const std::string* s = get("vector_id")) p.vector_id = *s;
  try {
    if (const std::string* s = get("scale")) p.scale = ParseDouble(*s, "scale");
    if (const std::string* s = get("components")) {
      for (const auto& item : nlohmann::json::parse(*s)) {
        p.components.emplace_back(item.at(0).get<std::string>(), item.at(1).get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, fmt::format("bad components metadata: {}", e.what()));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  return v;
}

TaskVector ReadTaskVector(const std::filesystem::path& path) {
  return TaskVectorFromCheckpoint(ReadCheckpoint(path));
}

void WriteTaskVector(const TaskVector& v, const std::filesystem::path& path) {
  WriteCheckpoint(TaskVectorToCheckpoint(v), path);
}

}  // namespace vecforge
