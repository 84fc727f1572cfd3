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

#ifndef VECFORGE_TENSOR_H_
#define VECFORGE_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vecforge {

enum class DType { kF32, kF16 };

std::string_view DTypeName(DType dtype);
std::size_t DTypeSize(DType dtype);
// Parses "F32" / "F16"; throws DtypeError otherwise.
DType ParseDType(std::string_view name);

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major tensor. Values are always held as float; a kF16 tensor
// holds only values exactly representable in binary16. Immutable once built.
class Tensor {
 public:
  // Throws ShapeError if a dimension is zero or the data length disagrees
  // with the shape. For kF16 the values are rounded to half precision.
  Tensor(Shape shape, std::vector<float> data, DType dtype = DType::kF32);

  static Tensor Zeros(Shape shape, DType dtype = DType::kF32);
  // Rounds each value once to the storage dtype. Throws Overflow when a
  // finite value rounds to infinity.
  static Tensor FromDoubles(Shape shape, std::span<const double> values,
                            DType dtype = DType::kF32);

  const Shape& shape() const { return shape_; }
  DType dtype() const { return dtype_; }
  std::span<const float> data() const { return data_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rank() const { return shape_.size(); }

  // Matrix view; requires rank 2.
  std::size_t rows() const;
  std::size_t cols() const;
  float at(std::size_t row, std::size_t col) const {
    return data_[row * shape_[1] + col];
  }

  // Same shape, dtype and element values (so 0.0 == -0.0).
  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  Shape shape_;
  DType dtype_;
  std::vector<float> data_;
};

// True when shape, dtype and the raw bit pattern of every element agree.
bool BitEqual(const Tensor& a, const Tensor& b);

// kF16 only when every input is kF16.
DType ResultDType(DType a, DType b);

// Rounds a 64-bit result into the storage dtype. Negative zero becomes
// positive zero. Throws Overflow if a finite value rounds to infinity.
float RoundToStorage(double value, DType dtype);

Tensor Add(const Tensor& a, const Tensor& b);
Tensor Subtract(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double c);
// a + c * b with a single rounding per element.
Tensor AddScaled(const Tensor& a, const Tensor& b, double c);
// Sum of coefficient * tensor with a single rounding per element. All terms
// must share one shape.
Tensor WeightedSum(std::span<const std::pair<const Tensor*, double>> terms);
// scale * (a x b) with 64-bit accumulation and one rounding per element.
Tensor Matmul(const Tensor& a, const Tensor& b, double scale = 1.0);
double CosineSimilarity(const Tensor& a, const Tensor& b);

struct TensorStats {
  double l2_norm = 0.0;
  double max_abs = 0.0;
  double mean = 0.0;
  double fraction_zero = 0.0;
};

TensorStats ComputeStats(const Tensor& a);

}  // namespace vecforge

#endif  // VECFORGE_TENSOR_H_
