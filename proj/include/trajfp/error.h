// Copyright 2026 The trajfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRAJFP_ERROR_H_
#define TRAJFP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace trajfp {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfBounds,
  kDegenerateInput,
  kEmptyCorpus,
  kDegenerateHull,
  kAllZeroLikelihood,
  kLengthMismatch,
  kUnknownTrajectory,
  kEmptyQuerySet,
  kEmptyDataset,
  kRoleMismatch,
  kParseError,
  kIoError,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDegenerateHull: return "DegenerateHull";
    case ErrorCode::kAllZeroLikelihood: return "AllZeroLikelihood";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kUnknownTrajectory: return "UnknownTrajectory";
    case ErrorCode::kEmptyQuerySet: return "EmptyQuerySet";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kRoleMismatch: return "RoleMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

// All library failures surface as this exception; `code()` identifies the
// failure class so callers (and the CLI's exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Takes a view so hot-path checks with literal messages never allocate.
inline void require(bool condition, ErrorCode code, std::string_view message) {
  if (!condition) throw Error(code, std::string(message));
}

}  // namespace trajfp

#endif  // TRAJFP_ERROR_H_
