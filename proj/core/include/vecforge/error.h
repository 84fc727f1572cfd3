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

#ifndef VECFORGE_ERROR_H_
#define VECFORGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vecforge {

// Every failure raised by the library carries one of these codes. The CLI
// maps IoError to exit status 1 and everything else to exit status 2.
enum class ErrorCode {
  kShapeMismatch,
  kOverflow,
  kNonFiniteCoefficient,
  kZeroNorm,
  kFormatError,
  kShapeError,
  kDtypeError,
  kIoError,
  kPairingError,
  kRankError,
  kKeySetMismatch,
  kUnknownKey,
  kBaseMismatch,
  kLengthMismatch,
  kDivergence,
  kEmptyReference,
  kAllFiltered,
  kDimMismatch,
  kGridError,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  bool is_io() const { return code_ == ErrorCode::kIoError; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kDtypeError: return "DtypeError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kPairingError: return "PairingError";
    case ErrorCode::kRankError: return "RankError";
    case ErrorCode::kKeySetMismatch: return "KeySetMismatch";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kBaseMismatch: return "BaseMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDivergence: return "DivergenceError";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kAllFiltered: return "AllFiltered";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kGridError: return "GridError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace vecforge

#endif  // VECFORGE_ERROR_H_
