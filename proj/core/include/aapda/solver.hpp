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

#include "aapda/problem.hpp"
#include "aapda/subsolver.hpp"
#include "aapda/trace.hpp"

namespace aapda {

/// Exponent p_k of the closed-loop rule mu_k^p ||grad_x L||^(p-1) = 1.
/// Either a constant or p_k = max(k, 1).
class PSchedule {
 public:
  static PSchedule constant(double p);
  static PSchedule iteration_index();

  double at(int k) const;
  bool is_iteration_index() const { return by_index_; }
  std::string describe() const;

 private:
  double value_ = 4.0;
  bool by_index_ = false;
};

struct AapdaOptions {
  PSchedule p = PSchedule::constant(4.0);
  double gamma_1 = 1.0;
  int max_iterations = 100;
  double stop_theta = 1e-6;
  /// Default: 1e-14 * (1 + ||grad f(x_1)||).
  std::optional<double> grad_stop_eps;
  /// When set, mu_k = max(raw mu_k, floor). Must be >= 1.
  std::optional<double> mu_floor;
  double subproblem_tol = 1e-10;
  SubsolverOptions subsolver;
  /// x_0 = x_1. Empty means the zero vector.
  Vector x_init;
  /// lambda_1. Empty means the zero vector.
  Vector lambda_init;
};

void validate(const AapdaOptions& opts);

/// Iteration state at the start of step k.
struct SolverState {
  int k = 1;
  Vector x_curr;
  Vector x_prev;
  Vector lambda_curr;
  double gamma_curr = 1.0;
  double gamma_next = 1.0;
  double tau_curr = 0.0;
  double tau_next = 0.0;
  double mu_curr = 1.0;
  /// grad f(x_k) + A^T lambda_k.
  Vector grad_x_curr;
};

/// ||grad||^(-(p-1)/p), raised to mu_floor when one is given.
double step_mu(double grad_norm, double p, std::optional<double> mu_floor = std::nullopt);

/// gamma_{k+1} = mu_k, tau_{k+1} = gamma_k + tau_k.
void advance_scaling(SolverState& state, double mu);

/// xbar_k = x_k + g'/(g'+t') (t_k/g_k (x_k - x_{k-1}) + g_k grad_x L(x_k, lambda_k)),
/// with g' = gamma_{k+1}, t' = tau_{k+1}.
Vector extrapolate(const SolverState& state);

/// sigma_{k+1} = (tau_{k+1} A x_k + gamma_{k+1} b - lambda_k) / (gamma_{k+1} + tau_{k+1}).
Vector dual_shift(const SolverState& state, const Problem& problem);

/// y_{k+1} = x_{k+1} + tau_{k+1}/gamma_{k+1} (x_{k+1} - x_k).
Vector momentum_point(const Vector& x_next, const Vector& x_curr, double tau_next, double gamma_next);

/// lambda_{k+1} = lambda_k + gamma_{k+1} (A y_{k+1} - b).
Vector dual_update(const Vector& lambda_curr, double gamma_next, const Vector& y_next,
                   const Problem& problem);

/// ||x_{k+1} - x_k|| / max(||x_k||, 1) <= theta.
bool should_stop(const Vector& x_next, const Vector& x_curr, double theta);

/// Runs the accelerated autonomous primal-dual algorithm. With a saddle
/// certificate the trace also carries f_gap, pd_gap and the discrete energy
///   E_k = tau_{k+1} (L(x_k, l*) - L(x*, l*)) + 1/2 ||u_k||^2 + 1/2 ||lambda_k - l*||^2,
///   u_k = y_k - x* + gamma_k grad_x L(x_k, lambda_k),   y_1 = x_1.
/// Subproblem failures are rethrown as RunFailure with the partial trace.
Trace run(const Problem& problem, const AapdaOptions& opts, const SaddlePoint* saddle = nullptr);

}  // namespace aapda
