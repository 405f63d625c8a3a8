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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aapda/error.hpp"
#include "aapda/problem.hpp"

namespace aapda {

/// One performed iteration. Quantities refer to the iterate x_k the step
/// started from; sub_stat is the stationarity achieved for x_{k+1}.
struct TraceRecord {
  int k = 0;
  std::optional<double> mu;
  std::optional<double> gamma_next;
  std::optional<double> tau_next;
  double grad_norm = 0.0;
  double f_value = 0.0;
  double feas = 0.0;
  std::optional<double> f_gap;
  std::optional<double> pd_gap;
  std::optional<double> energy;
  std::optional<double> sub_stat;
  /// The subproblem tolerance was below double-precision reach and the
  /// rounding floor was accepted instead.
  bool sub_floor_limited = false;
  std::int64_t wall_ns = 0;
  /// mu_k >= 1 and mu_k >= mu_{k-1}: the step-size hypothesis of the discrete
  /// energy argument. Always true for methods without a step scalar.
  bool hypothesis_ok = true;
  Vector x;
  Vector lambda;
};

enum class StopReason { kNone, kGradient, kRelativeChange, kIterationCap };

std::string_view to_string(StopReason reason);

struct TraceHeader {
  std::string solver;
  ProblemDescriptor problem;
  std::vector<std::pair<std::string, std::string>> options;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
  StopReason stop = StopReason::kNone;
  Vector x_final;
  Vector lambda_final;
  std::int64_t total_wall_ns = 0;

  int iterations() const { return static_cast<int>(records.size()); }
};

/// A solver failed part-way; the records gathered so far travel with it.
class RunFailure : public Error {
 public:
  RunFailure(ErrorCode cause, const std::string& what, Trace partial)
      : Error(cause, what), partial_(std::move(partial)) {}

  const Trace& partial_trace() const { return partial_; }

 private:
  Trace partial_;
};

}  // namespace aapda
