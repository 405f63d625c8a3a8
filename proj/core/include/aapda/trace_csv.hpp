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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aapda/ode.hpp"
#include "aapda/trace.hpp"

namespace aapda {

// Trace CSV layout:
//
//   # key: value            (zero or more header comment lines)
//   k,mu,gamma_next,tau_next,grad_norm,f_gap,feas,pd_gap,energy,sub_stat,wall_ns
//   1,0.5,0.5,1,...
//
// Trajectories use `t` in place of `k`. Absent values are empty fields.
// Numbers are shortest round-trip decimals. wall_ns is always written empty
// so that traces are byte-stable; timings go to a separate file.

inline constexpr const char* kTraceColumns[] = {"mu",       "gamma_next", "tau_next", "grad_norm",
                                                "f_gap",    "feas",       "pd_gap",   "energy",
                                                "sub_stat", "wall_ns"};

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  /// Column index, or -1.
  int find(const std::string& name) const;
  std::vector<std::optional<double>> column(const std::string& name) const;
};

void write_trace_csv(std::ostream& out, const Trace& trace);
/// ODE rows: gamma_next and sub_stat are empty, tau_next holds tau(t).
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj,
                          const std::vector<std::pair<std::string, std::string>>& header = {});

/// Header comment lines describing a trace: solver, problem, options, stop.
std::vector<std::string> trace_comments(const Trace& trace);

CsvTable read_csv(std::istream& in);

/// Checks the column set and row shape. Throws kParse naming the defect.
void validate_trace_schema(const CsvTable& table);

}  // namespace aapda
