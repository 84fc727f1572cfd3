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

#include "vecforge/text.h"

#include <fmt/format.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include "vecforge/error.h"

namespace vecforge {

std::string_view TextModeName(TextMode mode) {
  return mode == TextMode::kBasicEn ? "basic_en" : "none";
}

TextMode ParseTextMode(std::string_view name) {
  if (name == "basic_en") return TextMode::kBasicEn;
  if (name == "none") return TextMode::kNone;
  throw Error(ErrorCode::kConfigError, fmt::format("unknown text mode '{}'", name));
}

namespace {

icu::UnicodeString FromUtf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

void AppendUtf8(std::string& out, UChar32 c) {
  icu::UnicodeString(c).toUTF8String(out);
}

}  // namespace

std::string NormalizeText(std::string_view text, TextMode mode) {
  if (mode == TextMode::kNone) return std::string(text);
  icu::UnicodeString u = FromUtf8(text);
  u.toLower(icu::Locale::getRoot());
  std::string out;
  bool pending_space = false;
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    const UChar32 c = u.char32At(i);
    if (U_GET_GC_MASK(c) & U_GC_P_MASK) continue;
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    AppendUtf8(out, c);
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view text) {
  icu::UnicodeString u = FromUtf8(text);
  std::vector<std::string> words;
  std::string current;
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    const UChar32 c = u.char32At(i);
    if (u_isUWhiteSpace(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      AppendUtf8(current, c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::u32string ToCodePoints(std::string_view utf8) {
  icu::UnicodeString u = FromUtf8(utf8);
  std::u32string out;
  out.reserve(u.length());
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    out.push_back(static_cast<char32_t>(u.char32At(i)));
  }
  return out;
}

}  // namespace vecforge
