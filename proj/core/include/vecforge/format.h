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

#ifndef VECFORGE_FORMAT_H_
#define VECFORGE_FORMAT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace vecforge {

// Shortest decimal string that parses back to the same double.
std::string FormatDouble(double value);

// Whole-string decimal parse. Throws ConfigError naming `what` on trailing
// characters or a non-finite result.
double ParseDouble(std::string_view text, std::string_view what);
std::uint64_t ParseUnsigned(std::string_view text, std::string_view what);

}  // namespace vecforge

#endif  // VECFORGE_FORMAT_H_
