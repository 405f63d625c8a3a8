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

#include "aapda/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "aapda/format.hpp"
#include "aapda/lagrangian.hpp"
#include "aapda/solver.hpp"
#include "aapda/subsolver.hpp"

namespace aapda {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

void check_common(const BaselineOptions& opts) {
  if (opts.step && !(*opts.step > 0.0)) throw Error(ErrorCode::kInvalidParameter, "baseline: step must be positive");
  if (!(opts.beta > 0.0)) throw Error(ErrorCode::kInvalidParameter, "baseline: beta must be positive");
  if (opts.max_iterations < 1) throw Error(ErrorCode::kInvalidParameter, "baseline: max_iterations must be >= 1");
  if (!(opts.stop_theta >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "baseline: stop_theta must be >= 0");
}

double lipschitz_of(const Problem& problem) {
  if (auto hint = problem.lipschitz_hint()) return *hint;
  // Power iteration approaches ||Q|| from below; the margin keeps 1/L a safe step.
  if (problem.quadratic_form()) return 1.01 * hessian_norm_estimate(problem, 500);
  throw Error(ErrorCode::kUnsupportedProblem, "baseline: no Lipschitz constant available for f");
}

TraceRecord make_record(const Problem& problem, int k, const Vector& x, const Vector& lambda,
                        const SaddlePoint* saddle) {
  const LagrangianEval ev = eval_lagrangian(problem, x, lambda);
  TraceRecord rec;
  rec.k = k;
  rec.grad_norm = ev.grad_x_norm;
  rec.f_value = problem.f_value(x);
  rec.feas = ev.grad_lambda.norm();
  rec.x = x;
  rec.lambda = lambda;
  if (saddle != nullptr) {
    rec.pd_gap = pd_gap(problem, x, *saddle);
    rec.f_gap = std::abs(objective_gap(problem, x, saddle->x_star));
  }
  return rec;
}

Vector or_zeros(const Vector& v, Index n) { return v.size() == 0 ? Vector::Zero(n) : v; }

}  // namespace

Trace run_fista(const Problem& problem, const BaselineOptions& opts, const SaddlePoint* saddle) {
  check_common(opts);
  if (problem.dim_dual() != 0) {
    throw Error(ErrorCode::kUnsupportedProblem, "fista: only unconstrained problems (m = 0) are supported");
  }
  const auto t_start = Clock::now();
  const double alpha = opts.step ? *opts.step : 1.0 / lipschitz_of(problem);

  Trace trace;
  trace.header.solver = "fista";
  trace.header.problem = problem.descriptor();
  trace.header.options = {{"alpha", format_double(alpha)},
                          {"t_1", "1"},
                          {"max_iterations", std::to_string(opts.max_iterations)},
                          {"theta", format_double(opts.stop_theta)}};

  Vector x = or_zeros(opts.x_init, problem.dim_primal());
  if (x.size() != problem.dim_primal()) {
    throw Error(ErrorCode::kInvalidDimension, "fista: initial point dimension mismatch");
  }
  const Vector empty(0);
  Vector z = x;  // extrapolated point
  double t = 1.0;
  const double eps = opts.grad_stop_eps.value_or(1e-14 * (1.0 + problem.f_grad(x).norm()));

  for (int k = 1;; ++k) {
    const auto t_iter = Clock::now();
    TraceRecord rec = make_record(problem, k, x, empty, saddle);
    if (rec.grad_norm <= eps) {
      trace.stop = StopReason::kGradient;
      break;
    }
    if (k > opts.max_iterations) {
      trace.stop = StopReason::kIterationCap;
      break;
    }
    const Vector x_next = z - alpha * problem.f_grad(z);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x_next + ((t - 1.0) / t_next) * (x_next - x);
    t = t_next;
    const bool converged = opts.stop_theta > 0.0 && should_stop(x_next, x, opts.stop_theta);
    x = x_next;
    rec.wall_ns = elapsed_ns(t_iter);
    trace.records.push_back(std::move(rec));
    if (converged) {
      trace.stop = StopReason::kRelativeChange;
      break;
    }
  }
  trace.x_final = x;
  trace.lambda_final = empty;
  trace.total_wall_ns = elapsed_ns(t_start);
  return trace;
}

Trace run_lin_alm(const Problem& problem, const BaselineOptions& opts, const SaddlePoint* saddle) {
  check_common(opts);
  if (problem.dim_dual() == 0) {
    throw Error(ErrorCode::kUnsupportedProblem, "lin-alm: needs an equality constraint (m >= 1)");
  }
  const auto t_start = Clock::now();
  const double a_norm = constraint_norm_estimate(problem, 500) * 1.02;
  const double alpha =
      opts.step ? *opts.step : 1.0 / (lipschitz_of(problem) + opts.beta * a_norm * a_norm);

  Trace trace;
  trace.header.solver = "lin-alm";
  trace.header.problem = problem.descriptor();
  trace.header.options = {{"alpha", format_double(alpha)},
                          {"beta", format_double(opts.beta)},
                          {"max_iterations", std::to_string(opts.max_iterations)},
                          {"theta", format_double(opts.stop_theta)}};

  Vector x = or_zeros(opts.x_init, problem.dim_primal());
  Vector lambda = or_zeros(opts.lambda_init, problem.dim_dual());
  if (x.size() != problem.dim_primal() || lambda.size() != problem.dim_dual()) {
    throw Error(ErrorCode::kInvalidDimension, "lin-alm: initial point dimension mismatch");
  }
  const double eps = opts.grad_stop_eps.value_or(1e-14 * (1.0 + problem.f_grad(x).norm()));
  const double feas_0 = (problem.constraint_matvec(x) - problem.rhs()).norm();
  const double blow_up = 1e6 * std::max(feas_0, 1e-300);

  auto finish = [&] {
    trace.x_final = x;
    trace.lambda_final = lambda;
    trace.total_wall_ns = elapsed_ns(t_start);
  };

  for (int k = 1;; ++k) {
    const auto t_iter = Clock::now();
    TraceRecord rec = make_record(problem, k, x, lambda, saddle);
    if (!std::isfinite(rec.feas) || (feas_0 > 0.0 && rec.feas > blow_up)) {
      finish();
      throw RunFailure(ErrorCode::kDivergence,
                       "lin-alm: constraint residual grew from " + format_double(feas_0) + " to " +
                           format_double(rec.feas) + " at iteration " + std::to_string(k),
                       std::move(trace));
    }
    if (rec.grad_norm <= eps && rec.feas <= eps) {
      trace.stop = StopReason::kGradient;
      break;
    }
    if (k > opts.max_iterations) {
      trace.stop = StopReason::kIterationCap;
      break;
    }
    const Vector residual = problem.constraint_matvec(x) - problem.rhs();
    const Vector grad = problem.f_grad(x) + problem.constraint_adjoint(lambda + opts.beta * residual);
    const Vector x_next = x - alpha * grad;
    lambda += opts.beta * (problem.constraint_matvec(x_next) - problem.rhs());
    const bool converged = opts.stop_theta > 0.0 && should_stop(x_next, x, opts.stop_theta);
    x = x_next;
    rec.wall_ns = elapsed_ns(t_iter);
    trace.records.push_back(std::move(rec));
    if (converged) {
      trace.stop = StopReason::kRelativeChange;
      break;
    }
  }
  finish();
  return trace;
}

Trace run_baseline(const Problem& problem, const BaselineOptions& opts, const SaddlePoint* saddle) {
  return opts.method == BaselineMethod::kFista ? run_fista(problem, opts, saddle)
                                               : run_lin_alm(problem, opts, saddle);
}

}  // namespace aapda
