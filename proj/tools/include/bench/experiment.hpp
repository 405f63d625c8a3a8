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

#include <optional>
#include <string>
#include <vector>

#include "aapda/error.hpp"
#include "aapda/metrics.hpp"
#include "aapda/problem.hpp"
#include "bench/config.hpp"

namespace bench {

struct RunOptions {
  /// Overrides [output] dir.
  std::optional<std::string> out_dir;
  /// Overrides [output] plot.
  std::optional<bool> plot;
  /// Solver runs executed concurrently.
  int jobs = 1;
};

struct SolverOutcome {
  std::string name;
  SolverKind kind = SolverKind::kAapda;
  bool ok = false;
  std::optional<aapda::ErrorCode> error_code;
  std::string error;
  std::string stop;
  /// Rows written (iterations, or accepted ODE steps plus the initial row).
  std::size_t rows = 0;
  double wall_seconds = 0.0;
  std::optional<double> final_f_gap;
  std::optional<double> final_feas;
  std::optional<double> final_pd_gap;
  std::vector<aapda::RateReport> rates;
  std::vector<std::string> notes;
  /// Plot data: k or t, |f - f*| (may be empty), ||A x - b||.
  std::vector<double> axis;
  std::vector<double> f_gap;
  std::vector<double> feas;
};

struct ExperimentResult {
  std::string out_dir;
  std::string problem_line;
  std::string saddle_line;
  std::vector<SolverOutcome> solvers;

  bool any_solver_failed() const;
  bool any_io_failed() const;
};

/// The problem instance a config describes. Deterministic in the seed.
aapda::Problem build_problem(const ExperimentConfig& cfg);

/// Initial primal point for the configured problem.
aapda::Vector initial_point(const ExperimentConfig& cfg, aapda::Index n);

/// Runs every configured solver and writes `<name>.csv`, `summary.txt`,
/// `timing.txt` and, when plotting, `convergence.svg` into the output
/// directory. Solver failures are recorded in the result, not thrown.
/// Raises aapda::Error(kIo) when the output directory cannot be prepared or
/// the problem file cannot be read.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace bench
