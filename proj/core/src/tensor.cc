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

#include "vecforge/tensor.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include <fmt/format.h>

#include "vecforge/error.h"
#include "vecforge/half.h"

namespace vecforge {

std::string_view DTypeName(DType dtype) {
  return dtype == DType::kF16 ? "F16" : "F32";
}

std::size_t DTypeSize(DType dtype) { return dtype == DType::kF16 ? 2 : 4; }

DType ParseDType(std::string_view name) {
  if (name == "F32") return DType::kF32;
  if (name == "F16") return DType::kF16;
  throw Error(ErrorCode::kDtypeError, fmt::format("unsupported dtype '{}'", name));
}

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  return fmt::format("[{}]", fmt::join(shape, ", "));
}

float RoundToStorage(double value, DType dtype) {
  double rounded = dtype == DType::kF16 ? RoundToHalf(value) : value;
  auto out = static_cast<float>(rounded);
  if (std::isinf(out) && std::isfinite(value)) {
    throw Error(ErrorCode::kOverflow,
                fmt::format("{} does not fit in {}", value, DTypeName(dtype)));
  }
  return out + 0.0f;  // -0 -> +0
}

Tensor::Tensor(Shape shape, std::vector<float> data, DType dtype)
    : shape_(std::move(shape)), dtype_(dtype), data_(std::move(data)) {
  for (std::size_t d : shape_) {
    if (d == 0) {
      throw Error(ErrorCode::kShapeError,
                  fmt::format("zero dimension in shape {}", ShapeString(shape_)));
    }
  }
  if (data_.size() != NumElements(shape_)) {
    throw Error(ErrorCode::kShapeError,
                fmt::format("shape {} needs {} elements, got {}", ShapeString(shape_),
                            NumElements(shape_), data_.size()));
  }
  if (dtype_ == DType::kF16) {
    for (float& v : data_) v = static_cast<float>(RoundToHalf(v));
  }
}

Tensor Tensor::Zeros(Shape shape, DType dtype) {
  std::vector<float> data(NumElements(shape), 0.0f);
  return Tensor(std::move(shape), std::move(data), dtype);
}

Tensor Tensor::FromDoubles(Shape shape, std::span<const double> values, DType dtype) {
  std::vector<float> data(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) data[i] = RoundToStorage(values[i], dtype);
  return Tensor(std::move(shape), std::move(data), dtype);
}

std::size_t Tensor::rows() const {
  if (rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("expected a matrix, got shape {}", ShapeString(shape_)));
  }
  return shape_[0];
}

std::size_t Tensor::cols() const {
  rows();
  return shape_[1];
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.shape_ == b.shape_ && a.dtype_ == b.dtype_ && a.data_ == b.data_;
}

bool BitEqual(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape() || a.dtype() != b.dtype()) return false;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(da[i]) != std::bit_cast<std::uint32_t>(db[i])) {
      return false;
    }
  }
  return true;
}

DType ResultDType(DType a, DType b) {
  return a == DType::kF16 && b == DType::kF16 ? DType::kF16 : DType::kF32;
}

namespace {

void RequireSameShape(const Tensor& a, const Tensor& b, std::string_view op) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("{}: shapes {} and {} differ", op, ShapeString(a.shape()),
                            ShapeString(b.shape())));
  }
}

void RequireFinite(double c) {
  if (!std::isfinite(c)) {
    throw Error(ErrorCode::kNonFiniteCoefficient, fmt::format("coefficient {}", c));
  }
}

template <typename Fn>
Tensor Elementwise(const Tensor& a, const Tensor& b, Fn fn) {
  const DType out = ResultDType(a.dtype(), b.dtype());
  auto da = a.data();
  auto db = b.data();
  std::vector<float> data(da.size());
  for (std::size_t i = 0; i < da.size(); ++i) {
    data[i] = RoundToStorage(fn(static_cast<double>(da[i]), static_cast<double>(db[i])), out);
  }
  return Tensor(a.shape(), std::move(data), out);
}

}  // namespace

Tensor Add(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "add");
  return Elementwise(a, b, [](double x, double y) { return x + y; });
}

Tensor Subtract(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "subtract");
  return Elementwise(a, b, [](double x, double y) { return x - y; });
}

Tensor AddScaled(const Tensor& a, const Tensor& b, double c) {
  RequireSameShape(a, b, "add_scaled");
  RequireFinite(c);
  return Elementwise(a, b, [c](double x, double y) { return x + c * y; });
}

Tensor Scale(const Tensor& a, double c) {
  RequireFinite(c);
  if (c == 0.0) return Tensor::Zeros(a.shape(), a.dtype());
  auto da = a.data();
  std::vector<float> data(da.size());
  for (std::size_t i = 0; i < da.size(); ++i) {
    data[i] = RoundToStorage(c * static_cast<double>(da[i]), a.dtype());
  }
  return Tensor(a.shape(), std::move(data), a.dtype());
}

Tensor WeightedSum(std::span<const std::pair<const Tensor*, double>> terms) {
  if (terms.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "weighted sum of zero terms");
  }
  const Tensor& first = *terms.front().first;
  DType out = first.dtype();
  for (const auto& [t, c] : terms) {
    RequireSameShape(first, *t, "weighted_sum");
    RequireFinite(c);
    out = ResultDType(out, t->dtype());
  }
  std::vector<double> acc(first.size(), 0.0);
  for (const auto& [t, c] : terms) {
    auto d = t->data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * static_cast<double>(d[i]);
  }
  return Tensor::FromDoubles(first.shape(), acc, out);
}

Tensor Matmul(const Tensor& a, const Tensor& b, double scale) {
  RequireFinite(scale);
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("matmul: cannot multiply {} by {}", ShapeString(a.shape()),
                            ShapeString(b.shape())));
  }
  const std::size_t m = a.shape()[0];
  const std::size_t k = a.shape()[1];
  const std::size_t n = b.shape()[1];
  auto da = a.data();
  auto db = b.data();
  std::vector<double> acc(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* row = &acc[i * n];
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = da[i * k + p];
      const float* brow = &db[p * n];
      for (std::size_t j = 0; j < n; ++j) row[j] += aip * static_cast<double>(brow[j]);
    }
  }
  if (scale != 1.0) {
    for (double& v : acc) v *= scale;
  }
  return Tensor::FromDoubles({m, n}, acc, ResultDType(a.dtype(), b.dtype()));
}

double CosineSimilarity(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "cosine_similarity");
  auto da = a.data();
  auto db = b.data();
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double x = da[i];
    const double y = db[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (std::sqrt(na) < 1e-12 || std::sqrt(nb) < 1e-12) {
    throw Error(ErrorCode::kZeroNorm, "cosine similarity of a zero-norm vector");
  }
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for a == b this is exactly dot.
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

TensorStats ComputeStats(const Tensor& a) {
  TensorStats s;
  double sum = 0.0, sq = 0.0;
  std::size_t zeros = 0;
  for (float v : a.data()) {
    const double x = v;
    sum += x;
    sq += x * x;
    s.max_abs = std::max(s.max_abs, std::fabs(x));
    if (x == 0.0) ++zeros;
  }
  const auto n = static_cast<double>(a.size());
  s.l2_norm = std::sqrt(sq);
  s.mean = sum / n;
  s.fraction_zero = static_cast<double>(zeros) / n;
  return s;
}

}  // namespace vecforge
