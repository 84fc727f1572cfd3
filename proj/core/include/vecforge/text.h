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

#ifndef VECFORGE_TEXT_H_
#define VECFORGE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace vecforge {

enum class TextMode {
  // Lowercase, drop Unicode punctuation (general category P*), collapse
  // whitespace runs to one space and trim. An approximation of
  // Whisper-style English normalization; use kNone with externally
  // normalized text for exact parity.
  kBasicEn,
  kNone,
};

std::string_view TextModeName(TextMode mode);
TextMode ParseTextMode(std::string_view name);

std::string NormalizeText(std::string_view text, TextMode mode);

// Splits on Unicode whitespace; never yields empty tokens.
std::vector<std::string> SplitWords(std::string_view text);

// UTF-8 decode; malformed sequences become U+FFFD.
std::u32string ToCodePoints(std::string_view utf8);

}  // namespace vecforge

#endif  // VECFORGE_TEXT_H_
