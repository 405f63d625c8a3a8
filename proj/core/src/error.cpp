// Copyright 2026 The AAPDA Authors
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

#include "aapda/error.hpp"

namespace aapda {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kNoSaddlePoint: return "no-saddle-point";
    case ErrorCode::kUnsupportedProblem: return "unsupported-problem";
    case ErrorCode::kSaddleCertificateInvalid: return "saddle-certificate-invalid";
    case ErrorCode::kSubproblemNotConverged: return "subproblem-not-converged";
    case ErrorCode::kNonpositiveGradient: return "nonpositive-gradient";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kStiffness: return "stiffness";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace aapda
