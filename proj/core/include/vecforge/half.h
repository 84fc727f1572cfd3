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

#ifndef VECFORGE_HALF_H_
#define VECFORGE_HALF_H_

#include <cstdint>

namespace vecforge {

// IEEE 754 binary16 conversions. Encoding rounds to nearest, ties to even;
// magnitudes at or beyond 65520 encode as infinity.
std::uint16_t EncodeHalf(double value);
float DecodeHalf(std::uint16_t bits);

// Nearest binary16 value, returned widened.
inline double RoundToHalf(double value) { return DecodeHalf(EncodeHalf(value)); }

}  // namespace vecforge

#endif  // VECFORGE_HALF_H_
