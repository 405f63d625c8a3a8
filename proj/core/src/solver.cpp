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

#include "aapda/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

#include "aapda/format.hpp"
#include "aapda/lagrangian.hpp"

namespace aapda {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kNone: return "none";
    case StopReason::kGradient: return "gradient";
    case StopReason::kRelativeChange: return "relative-change";
    case StopReason::kIterationCap: return "iteration-cap";
  }
  return "unknown";
}

PSchedule PSchedule::constant(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidParameter, "p must be a finite number >= 1");
  }
  PSchedule s;
  s.value_ = p;
  return s;
}

PSchedule PSchedule::iteration_index() {
  PSchedule s;
  s.by_index_ = true;
  return s;
}

double PSchedule::at(int k) const {
  return by_index_ ? static_cast<double>(std::max(k, 1)) : value_;
}

std::string PSchedule::describe() const { return by_index_ ? "k" : format_double(value_); }

void validate(const AapdaOptions& opts) {
  if (!(opts.gamma_1 > 0.0)) throw Error(ErrorCode::kInvalidParameter, "aapda: gamma_1 must be positive");
  if (opts.max_iterations < 1) throw Error(ErrorCode::kInvalidParameter, "aapda: max_iterations must be >= 1");
  if (!(opts.stop_theta > 0.0)) throw Error(ErrorCode::kInvalidParameter, "aapda: stop_theta must be positive");
  if (opts.grad_stop_eps && !(*opts.grad_stop_eps >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "aapda: grad_stop_eps must be nonnegative");
  }
  if (opts.mu_floor && !(*opts.mu_floor >= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "aapda: mu_floor must be >= 1");
  }
  if (!(opts.subproblem_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "aapda: subproblem tolerance must be positive");
  }
}

double step_mu(double grad_norm, double p, std::optional<double> mu_floor) {
  if (!(grad_norm > 0.0)) {
    throw Error(ErrorCode::kNonpositiveGradient,
                "step_mu: gradient norm must be positive (take the stop branch at a stationary point)");
  }
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidParameter, "step_mu: p must be >= 1");
  const double mu = std::pow(grad_norm, -(p - 1.0) / p);
  return mu_floor ? std::max(mu, *mu_floor) : mu;
}

void advance_scaling(SolverState& state, double mu) {
  state.mu_curr = mu;
  state.gamma_next = mu;
  state.tau_next = state.gamma_curr + state.tau_curr;
}

Vector extrapolate(const SolverState& s) {
  const double weight = s.gamma_next / (s.gamma_next + s.tau_next);
  return s.x_curr + weight * ((s.tau_curr / s.gamma_curr) * (s.x_curr - s.x_prev) +
                              s.gamma_curr * s.grad_x_curr);
}

Vector dual_shift(const SolverState& s, const Problem& problem) {
  if (problem.dim_dual() == 0) return Vector(0);
  return (s.tau_next * problem.constraint_matvec(s.x_curr) + s.gamma_next * problem.rhs() -
          s.lambda_curr) /
         (s.gamma_next + s.tau_next);
}

Vector momentum_point(const Vector& x_next, const Vector& x_curr, double tau_next, double gamma_next) {
  return x_next + (tau_next / gamma_next) * (x_next - x_curr);
}

Vector dual_update(const Vector& lambda_curr, double gamma_next, const Vector& y_next,
                   const Problem& problem) {
  if (problem.dim_dual() == 0) return Vector(0);
  return lambda_curr + gamma_next * (problem.constraint_matvec(y_next) - problem.rhs());
}

bool should_stop(const Vector& x_next, const Vector& x_curr, double theta) {
  return (x_next - x_curr).norm() / std::max(x_curr.norm(), 1.0) <= theta;
}

namespace {

std::vector<std::pair<std::string, std::string>> describe_options(const AapdaOptions& o) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"p", o.p.describe()},
      {"gamma_1", format_double(o.gamma_1)},
      {"tau_1", "0"},
      {"max_iterations", std::to_string(o.max_iterations)},
      {"theta", format_double(o.stop_theta)},
      {"subproblem_tol", format_double(o.subproblem_tol)},
  };
  if (o.grad_stop_eps) out.emplace_back("grad_stop_eps", format_double(*o.grad_stop_eps));
  if (o.mu_floor) out.emplace_back("mu_floor", format_double(*o.mu_floor));
  return out;
}

Vector or_zeros(const Vector& v, Index n) { return v.size() == 0 ? Vector::Zero(n) : v; }

using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// A x - b accumulated in extended precision when A is stored densely.
class ExtendedResidual {
 public:
  explicit ExtendedResidual(const Problem& problem) : problem_(problem) {
    if (const auto& a = problem.constraint_dense()) a_ = a->cast<long double>();
    b_ = problem.rhs().cast<long double>();
  }

  LongVector operator()(const Vector& x) const {
    if (a_.size() > 0) return a_ * x.cast<long double>() - b_;
    return problem_.constraint_matvec(x).cast<long double>() - b_;
  }

 private:
  const Problem& problem_;
  LongMatrix a_;
  LongVector b_;
};

}  // namespace

Trace run(const Problem& problem, const AapdaOptions& opts, const SaddlePoint* saddle) {
  validate(opts);
  const Index n = problem.dim_primal();
  const Index m = problem.dim_dual();
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();

  Trace trace;
  trace.header.solver = "aapda";
  trace.header.problem = problem.descriptor();
  trace.header.options = describe_options(opts);

  SolverState s;
  s.x_curr = or_zeros(opts.x_init, n);
  s.lambda_curr = or_zeros(opts.lambda_init, m);
  if (s.x_curr.size() != n || s.lambda_curr.size() != m) {
    throw Error(ErrorCode::kInvalidDimension, "aapda: initial point dimension mismatch");
  }
  s.x_prev = s.x_curr;
  s.gamma_curr = opts.gamma_1;
  s.tau_curr = 0.0;
  Vector y_curr = s.x_curr;  // y_1 = x_1 since tau_1 = 0
  const ExtendedResidual residual(problem);
  LongVector r_curr = m > 0 ? residual(s.x_curr) : LongVector();

  const double eps = opts.grad_stop_eps.value_or(1e-14 * (1.0 + problem.f_grad(s.x_curr).norm()));
  SubsolverOptions sub_opts = opts.subsolver;
  if (!problem.quadratic_form() && m > 0 && !sub_opts.constraint_norm) {
    sub_opts.constraint_norm = 1.02 * constraint_norm_estimate(problem, 200);
  }
  if (!sub_opts.spectral && !sub_opts.force_method && problem.dim_primal() >= kSpectralMinDim &&
      problem.dim_primal() <= sub_opts.direct_threshold) {
    if (auto f = SpectralFactor::build(problem)) {
      sub_opts.spectral = std::make_shared<const SpectralFactor>(std::move(*f));
    }
  }

  std::optional<double> prev_mu;
  auto finish = [&](StopReason reason) {
    trace.stop = reason;
    trace.x_final = s.x_curr;
    trace.lambda_final = s.lambda_curr;
    trace.total_wall_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t_start).count();
  };

  for (;;) {
    const auto t_iter = Clock::now();
    const LagrangianEval ev = eval_lagrangian(problem, s.x_curr, s.lambda_curr);
    s.grad_x_curr = ev.grad_x;
    if (ev.grad_x_norm <= eps) {
      finish(StopReason::kGradient);
      return trace;
    }
    if (s.k > opts.max_iterations) {
      finish(StopReason::kIterationCap);
      return trace;
    }

    // Step 1: closed-loop step scalar, scaling recurrence, extrapolation.
    const double mu = step_mu(ev.grad_x_norm, opts.p.at(s.k), opts.mu_floor);
    advance_scaling(s, mu);
    Vector xbar = extrapolate(s);
    Vector sigma = dual_shift(s, problem);

    TraceRecord rec;
    rec.k = s.k;
    rec.mu = mu;
    rec.gamma_next = s.gamma_next;
    rec.tau_next = s.tau_next;
    rec.grad_norm = ev.grad_x_norm;
    rec.f_value = problem.f_value(s.x_curr);
    rec.feas = ev.grad_lambda.norm();
    rec.hypothesis_ok = mu >= 1.0 && (!prev_mu || mu >= *prev_mu);
    rec.x = s.x_curr;
    rec.lambda = s.lambda_curr;
    prev_mu = mu;
    if (saddle != nullptr) {
      try {
        const double gap = pd_gap(problem, s.x_curr, *saddle);
        rec.pd_gap = gap;
        rec.f_gap = std::abs(objective_gap(problem, s.x_curr, saddle->x_star));
        const Vector u = y_curr - saddle->x_star + s.gamma_curr * s.grad_x_curr;
        rec.energy = s.tau_next * gap + 0.5 * u.squaredNorm() +
                     0.5 * (s.lambda_curr - saddle->lambda_star).squaredNorm();
      } catch (const Error& e) {
        finish(StopReason::kNone);
        throw RunFailure(e.code(), e.what(), std::move(trace));
      }
    }

    // Step 2: primal subproblem.
    SubSolution sub;
    try {
      const SubproblemSpec spec =
          SubproblemSpec::make(problem, std::move(xbar), std::move(sigma), s.gamma_next, s.tau_next);
      sub = solve_subproblem(spec, opts.subproblem_tol, sub_opts);
    } catch (const Error& e) {
      rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t_iter).count();
      trace.records.push_back(std::move(rec));
      finish(StopReason::kNone);
      throw RunFailure(e.code(), "aapda iteration " + std::to_string(s.k) + ": " + e.what(),
                       std::move(trace));
    }
    rec.sub_stat = sub.stationarity_norm;

    rec.sub_floor_limited = sub.floor_limited;

    // Step 3: momentum point and dual ascent. The dual step equals
    // dual_update(), but gamma_{k+1} (A y_{k+1} - b) is summed as
    // (gamma_{k+1} + tau_{k+1}) r_{k+1} - tau_{k+1} r_k with r = A x - b, so the
    // rounding of A y - b is not amplified by gamma_{k+1}.
    Vector y_next = momentum_point(sub.x_next, s.x_curr, s.tau_next, s.gamma_next);
    Vector lambda_next(m);
    LongVector r_next;
    if (m > 0) {
      r_next = residual(sub.x_next);
      const auto tau_after = static_cast<long double>(s.gamma_next + s.tau_next);
      lambda_next = (s.lambda_curr.cast<long double>() + tau_after * r_next -
                     static_cast<long double>(s.tau_next) * r_curr)
                        .cast<double>();
    }
    const bool converged = should_stop(sub.x_next, s.x_curr, opts.stop_theta);

    rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t_iter).count();
    trace.records.push_back(std::move(rec));

    s.x_prev = std::move(s.x_curr);
    s.x_curr = std::move(sub.x_next);
    s.lambda_curr = std::move(lambda_next);
    y_curr = std::move(y_next);
    r_curr = std::move(r_next);
    s.gamma_curr = s.gamma_next;
    s.tau_curr = s.tau_next;
    ++s.k;

    if (converged) {
      finish(StopReason::kRelativeChange);
      return trace;
    }
  }
}

}  // namespace aapda
