// Copyright 2026 The Authors.
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

namespace leadsel {

enum class ErrorCode {
  kSelfLoop,
  kDuplicateEdge,
  kNonPositiveWeight,
  kNodeOutOfRange,
  kInvalidProbability,
  kParseError,
  kSchemaError,
  kNotSymmetric,
  kNotPositiveDefinite,
  kSingularUpdate,
  kUnstableMatrix,
  kDimensionCap,
  kUnsupportedOrder,
  kInvalidGains,
  kEmptyLeaderSet,
  kEigenFailure,
  kUnstableSystem,
  kPreconditionViolated,
  kCombinatorialCap,
  kStepTooLarge,
  kInvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kNonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kSingularUpdate: return "SingularUpdate";
    case ErrorCode::kUnstableMatrix: return "UnstableMatrix";
    case ErrorCode::kDimensionCap: return "DimensionCap";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kInvalidGains: return "InvalidGains";
    case ErrorCode::kEmptyLeaderSet: return "EmptyLeaderSet";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kUnstableSystem: return "UnstableSystem";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kCombinatorialCap: return "CombinatorialCap";
    case ErrorCode::kStepTooLarge: return "StepTooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() carries the
// machine-readable kind, what() a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace leadsel
