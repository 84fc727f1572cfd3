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

#include "vecforge/half.h"

#include <cmath>
#include <limits>

namespace vecforge {

std::uint16_t EncodeHalf(double value) {
  std::uint16_t sign = std::signbit(value) ? 0x8000 : 0;
  if (std::isnan(value)) return sign | 0x7e00;
  double mag = std::fabs(value);
  if (mag >= 65520.0) return sign | 0x7c00;

  // Subnormal range: quantum is 2^-24.
  if (mag < 0x1p-14) {
    auto q = static_cast<std::uint16_t>(std::nearbyint(mag * 0x1p24));
    return sign | q;  // q == 0x400 is the smallest normal, encoded correctly.
  }

  int exp = 0;
  double frac = std::frexp(mag, &exp);  // mag = frac * 2^exp, frac in [0.5, 1)
  int biased = exp - 1 + 15;
  auto mant = static_cast<std::uint32_t>(std::nearbyint((frac * 2.0 - 1.0) * 1024.0));
  if (mant == 1024) {
    mant = 0;
    ++biased;
  }
  if (biased >= 31) return sign | 0x7c00;
  return sign | static_cast<std::uint16_t>((biased << 10) | mant);
}

float DecodeHalf(std::uint16_t bits) {
  const bool negative = (bits & 0x8000) != 0;
  const int exp = (bits >> 10) & 0x1f;
  const int mant = bits & 0x3ff;
  float mag;
  if (exp == 0) {
    mag = std::ldexp(static_cast<float>(mant), -24);
  } else if (exp == 31) {
    mag = mant == 0 ? std::numeric_limits<float>::infinity()
                    : std::numeric_limits<float>::quiet_NaN();
  } else {
    mag = std::ldexp(static_cast<float>(mant + 1024), exp - 25);
  }
  return negative ? -mag : mag;
}

}  // namespace vecforge
