// Copyright 2026 The revmap Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace revmap {

enum class ErrorCode {
  kParallelLine,
  kDegenerateProjection,
  kNotOnSphere,
  kOutOfDomain,
  kInvalidInput,
  kZeroVector,
  kGroupMismatch,
  kDimensionMismatch,
  kNotNormalized,
  kBadQubitIndex,
  kLengthMismatch,
  kTooManyQubits,
  kBadMagic,
  kTruncatedPayload,
  kMissingFiles,
  kInsufficientSamples,
  kBudgetTooSmall,
  kConfigError,
  kEmptyInput,
  kNetworkError,
  kIoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParallelLine: return "ParallelLine";
    case ErrorCode::kDegenerateProjection: return "DegenerateProjection";
    case ErrorCode::kNotOnSphere: return "NotOnSphere";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kGroupMismatch: return "GroupMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kBadQubitIndex: return "BadQubitIndex";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooManyQubits: return "TooManyQubits";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kMissingFiles: return "MissingFiles";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNetworkError: return "NetworkError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace revmap
