// Copyright 2026 The AWES-OCP Authors
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

#ifndef AWES_ERRORS_HPP_
#define AWES_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace awes {

enum class ErrorCode {
  kSingularConfiguration,
  kInvalidAltitude,
  kDegenerateAirspeed,
  kInvalidSurfaceKind,
  kNonPositiveTension,
  kNonPositiveLength,
  kDegeneratePosition,
  kDegenerateGeometry,
  kSlackSegment,
  kNoConvergence,
  kSingularJacobian,
  kDimensionMismatch,
  kConfigError,
  kStageFailure,
  kMeshMismatch,
  kIoError,
  kLinearAlgebraFailure,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularConfiguration: return "SingularConfiguration";
    case ErrorCode::kInvalidAltitude: return "InvalidAltitude";
    case ErrorCode::kDegenerateAirspeed: return "DegenerateAirspeed";
    case ErrorCode::kInvalidSurfaceKind: return "InvalidSurfaceKind";
    case ErrorCode::kNonPositiveTension: return "NonPositiveTension";
    case ErrorCode::kNonPositiveLength: return "NonPositiveLength";
    case ErrorCode::kDegeneratePosition: return "DegeneratePosition";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kSlackSegment: return "SlackSegment";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSingularJacobian: return "SingularJacobian";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kStageFailure: return "StageFailure";
    case ErrorCode::kMeshMismatch: return "MeshMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kLinearAlgebraFailure: return "LinearAlgebraFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace awes

#endif  // AWES_ERRORS_HPP_
