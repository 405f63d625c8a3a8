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

#include "aapda/problem.hpp"
#include "aapda/trace.hpp"

namespace aapda {

// Comparison methods for the benchmark harness. These are the textbook
// FISTA and a generic linearized augmented Lagrangian method; they stand in
// for the comparators FPDA, AALM, PIA and AFBM, which are not implemented.

enum class BaselineMethod { kFista, kLinAlm };

struct BaselineOptions {
  BaselineMethod method = BaselineMethod::kFista;
  /// Primal step. Defaults: 1/||Q|| for FISTA, 1/(||Q|| + beta ||A||^2) for lin-alm.
  std::optional<double> step;
  /// Penalty and dual step of lin-alm.
  double beta = 1.0;
  int max_iterations = 500;
  /// Relative-change stop; 0 disables it.
  double stop_theta = 0.0;
  /// Gradient-norm stop; default 1e-14 (1 + ||grad f(x_1)||).
  std::optional<double> grad_stop_eps;
  Vector x_init;
  Vector lambda_init;
};

/// Accelerated gradient with t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, t_1 = 1.
/// Needs m = 0. Records one row per gradient step, at the iterate x_k.
Trace run_fista(const Problem& problem, const BaselineOptions& opts,
                const SaddlePoint* saddle = nullptr);

/// x <- x - alpha (grad f(x) + A^T lambda + beta A^T (A x - b)),
/// lambda <- lambda + beta (A x_new - b). Needs m >= 1. Raises kDivergence
/// when ||A x - b|| grows past 1e6 times its starting value.
Trace run_lin_alm(const Problem& problem, const BaselineOptions& opts,
                  const SaddlePoint* saddle = nullptr);

Trace run_baseline(const Problem& problem, const BaselineOptions& opts,
                   const SaddlePoint* saddle = nullptr);

}  // namespace aapda
