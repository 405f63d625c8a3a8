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

#include "aapda/subsolver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "aapda/format.hpp"

namespace aapda {
namespace {

constexpr int kDirectRefinements = 3;
constexpr int kNormEstimateIters = 200;

Index max_inner(const SubproblemSpec& spec, const SubsolverOptions& options) {
  if (options.max_inner_iterations > 0) return options.max_inner_iterations;
  return std::max<Index>(10 * spec.problem->dim_primal(), 1000);
}

// Applies Q + 2 prox I + 2 pen A^T A without forming it.
Vector apply_system(const SubproblemSpec& spec, const Vector& v) {
  const Problem& p = *spec.problem;
  Vector out = p.quadratic_form()->apply(v) + 2.0 * spec.prox_weight * v;
  if (p.dim_dual() > 0) {
    out += 2.0 * spec.penalty_weight * p.constraint_adjoint(p.constraint_matvec(v));
  }
  return out;
}

Vector system_rhs(const SubproblemSpec& spec) {
  const Problem& p = *spec.problem;
  Vector rhs = -p.quadratic_form()->linear + 2.0 * spec.prox_weight * spec.xbar;
  if (p.dim_dual() > 0) rhs += 2.0 * spec.penalty_weight * p.constraint_adjoint(spec.sigma);
  return rhs;
}

Matrix assemble_system(const SubproblemSpec& spec) {
  const Problem& p = *spec.problem;
  const QuadraticForm& q = *p.quadratic_form();
  const Index n = p.dim_primal();
  Matrix system = (q.kind == QuadraticForm::Kind::kDense) ? q.matrix : Matrix::Zero(n, n);
  system.diagonal().array() +=
      2.0 * spec.prox_weight + (q.kind == QuadraticForm::Kind::kScaledIdentity ? q.scale : 0.0);
  if (p.dim_dual() > 0) system.noalias() += (2.0 * spec.penalty_weight) * *p.constraint_gram();
  return system;
}

struct IterativeResult {
  Vector x;
  double stationarity;
  Index iterations;
  bool converged;
};

double effective_target(const SubproblemSpec& spec, const Vector& x, double target) {
  return std::max(target, stationarity_floor(spec, x));
}

IterativeResult conjugate_gradient(const SubproblemSpec& spec, Vector x, double target,
                                   Index max_iters) {
  const Vector rhs = system_rhs(spec);
  Vector r = rhs - apply_system(spec, x);
  Vector d = r;
  double rr = r.squaredNorm();
  Index it = 0;
  double stat = stationarity_norm(spec, x);
  Vector best = x;
  double best_stat = stat;
  while (it < max_iters) {
    if (stat <= effective_target(spec, x, target)) return {std::move(x), stat, it, true};
    const Vector md = apply_system(spec, d);
    const double dmd = d.dot(md);
    if (!(dmd > 0.0)) break;
    const double alpha = rr / dmd;
    x += alpha * d;
    r -= alpha * md;
    ++it;
    double rr_new = r.squaredNorm();
    if (std::sqrt(rr_new) <= 0.5 * target || it % 50 == 0) {
      // Replace the recursive residual, which drifts, by the true one.
      r = -subproblem_gradient(spec, x);
      rr_new = r.squaredNorm();
      stat = std::sqrt(rr_new);
      if (stat < best_stat) {
        best_stat = stat;
        best = x;
      }
    }
    d = r + (rr_new / rr) * d;
    rr = rr_new;
  }
  stat = stationarity_norm(spec, x);
  if (stat < best_stat) {
    best_stat = stat;
    best = std::move(x);
  }
  return {best, best_stat, it, best_stat <= effective_target(spec, best, target)};
}

IterativeResult accelerated_gradient(const SubproblemSpec& spec, double target, Index max_iters,
                                     double constraint_norm) {
  const Problem& p = *spec.problem;
  std::optional<double> lip = p.lipschitz_hint();
  if (!lip && p.quadratic_form()) lip = 1.01 * hessian_norm_estimate(p, 500);
  if (!lip) {
    throw Error(ErrorCode::kUnsupportedProblem,
                "solve_subproblem: non-quadratic objective requires a lipschitz hint");
  }
  const double strong = 2.0 * spec.prox_weight;
  const double smooth =
      *lip + strong + 2.0 * spec.penalty_weight * constraint_norm * constraint_norm;
  const double kappa_root = std::sqrt(smooth / strong);
  const double momentum = (kappa_root - 1.0) / (kappa_root + 1.0);

  Vector x = spec.xbar;
  Vector y = x;
  Vector best = x;
  double best_stat = stationarity_norm(spec, x);
  for (Index it = 1; it <= max_iters; ++it) {
    const Vector x_new = y - subproblem_gradient(spec, y) / smooth;
    y = x_new + momentum * (x_new - x);
    x = x_new;
    const double stat = stationarity_norm(spec, x);
    if (stat < best_stat) {
      best_stat = stat;
      best = x;
    }
    if (stat <= effective_target(spec, x, target)) return {std::move(x), stat, it, true};
  }
  return {best, best_stat, max_iters, best_stat <= effective_target(spec, best, target)};
}

double power_iteration(Index n, const std::function<Vector(const Vector&)>& apply_sym, int iters) {
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Vector w = apply_sym(v);
    const double norm_w = w.norm();
    if (norm_w == 0.0) return estimate;
    const double prev = estimate;
    estimate = norm_w;
    v = w / norm_w;
    if (it > 0 && std::abs(estimate - prev) <= 1e-13 * estimate) break;
  }
  return estimate;
}

}  // namespace

std::string_view to_string(SubMethod method) {
  switch (method) {
    case SubMethod::kDirect: return "direct";
    case SubMethod::kConjugateGradient: return "conjugate-gradient";
    case SubMethod::kInnerAcceleratedGradient: return "inner-accelerated-gradient";
  }
  return "unknown";
}

SubproblemSpec SubproblemSpec::make(const Problem& problem, Vector xbar, Vector sigma,
                                    double gamma_next, double tau_next) {
  if (!(gamma_next > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "subproblem: gamma_next must be positive");
  }
  if (xbar.size() != problem.dim_primal() || sigma.size() != problem.dim_dual()) {
    throw Error(ErrorCode::kInvalidDimension, "subproblem: xbar/sigma dimension mismatch");
  }
  SubproblemSpec spec;
  spec.problem = &problem;
  spec.xbar = std::move(xbar);
  spec.sigma = std::move(sigma);
  spec.gamma_next = gamma_next;
  spec.tau_next = tau_next;
  spec.prox_weight = (gamma_next + tau_next) / (4.0 * gamma_next * gamma_next);
  spec.penalty_weight = (gamma_next + tau_next) / 2.0;
  return spec;
}

Vector subproblem_gradient(const SubproblemSpec& spec, const Vector& x) {
  const Problem& p = *spec.problem;
  Vector g = p.f_grad(x) + 2.0 * spec.prox_weight * (x - spec.xbar);
  if (p.dim_dual() > 0) {
    g += 2.0 * spec.penalty_weight * p.constraint_adjoint(p.constraint_matvec(x) - spec.sigma);
  }
  return g;
}

double stationarity_norm(const SubproblemSpec& spec, const Vector& x) {
  return subproblem_gradient(spec, x).norm();
}

double stationarity_floor(const SubproblemSpec& spec, const Vector& x) {
  const Problem& p = *spec.problem;
  double magnitude = p.f_grad(x).norm() + 2.0 * spec.prox_weight * (x.norm() + spec.xbar.norm());
  if (p.dim_dual() > 0) {
    magnitude += 2.0 * spec.penalty_weight *
                 (p.constraint_adjoint(p.constraint_matvec(x)).norm() + p.constraint_adjoint(spec.sigma).norm());
  }
  const double factor = std::max(64.0, 4.0 * std::sqrt(static_cast<double>(x.size())));
  return factor * std::numeric_limits<double>::epsilon() * magnitude;
}

double subproblem_objective(const SubproblemSpec& spec, const Vector& x) {
  const Problem& p = *spec.problem;
  double value = p.f_value(x) + spec.prox_weight * (x - spec.xbar).squaredNorm();
  if (p.dim_dual() > 0) {
    value += spec.penalty_weight * (p.constraint_matvec(x) - spec.sigma).squaredNorm();
  }
  return value;
}

std::optional<SpectralFactor> SpectralFactor::build(const Problem& problem) {
  const auto& q = problem.quadratic_form();
  if (!q) return std::nullopt;
  SpectralFactor f;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  if (problem.dim_dual() == 0 && q->kind == QuadraticForm::Kind::kDense) {
    eig.compute(q->matrix);
  } else if (problem.dim_dual() > 0 && q->kind == QuadraticForm::Kind::kScaledIdentity &&
             problem.constraint_gram()) {
    eig.compute(*problem.constraint_gram());
    f.fixed_is_gram_ = true;
    f.identity_scale_ = q->scale;
  } else {
    return std::nullopt;
  }
  if (eig.info() != Eigen::Success) return std::nullopt;
  f.basis_ = eig.eigenvectors();
  // Both fixed parts are positive semidefinite; clip rounding below zero.
  f.eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
  return f;
}

Vector SpectralFactor::solve(double prox_weight, double penalty_weight, const Vector& rhs) const {
  Vector diag = Vector::Constant(eigenvalues_.size(), 2.0 * prox_weight);
  if (fixed_is_gram_) {
    diag.array() += identity_scale_ + 2.0 * penalty_weight * eigenvalues_.array();
  } else {
    diag += eigenvalues_;
  }
  const Vector coeff = (basis_.transpose() * rhs).cwiseQuotient(diag);
  return basis_ * coeff;
}

SubSolution solve_subproblem(const SubproblemSpec& spec, double tol, const SubsolverOptions& options) {
  if (spec.problem == nullptr) {
    throw Error(ErrorCode::kInvalidParameter, "solve_subproblem: spec has no problem");
  }
  if (!(spec.gamma_next > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "solve_subproblem: gamma_next and tol must be positive");
  }
  const Problem& p = *spec.problem;
  const Index n = p.dim_primal();
  const double target = tol * (1.0 + spec.xbar.norm());
  const bool quadratic = p.quadratic_form().has_value();
  const bool dense_ready = p.dim_dual() == 0 || p.constraint_gram().has_value();

  SubMethod method = SubMethod::kInnerAcceleratedGradient;
  if (quadratic) {
    method = (n <= options.direct_threshold && dense_ready) ? SubMethod::kDirect
                                                            : SubMethod::kConjugateGradient;
  }
  if (options.force_method) {
    method = *options.force_method;
    if (method != SubMethod::kInnerAcceleratedGradient && !quadratic) {
      throw Error(ErrorCode::kUnsupportedProblem, "solve_subproblem: linear-system paths need a quadratic objective");
    }
    if (method == SubMethod::kDirect && !dense_ready) {
      throw Error(ErrorCode::kUnsupportedProblem, "solve_subproblem: direct path needs a dense constraint matrix");
    }
  }

  SubSolution sol;
  sol.method = method;

  if (method == SubMethod::kDirect) {
    const Vector rhs = system_rhs(spec);
    std::function<Vector(const Vector&)> solve;
    Eigen::LLT<Matrix> llt;
    Eigen::LDLT<Matrix> ldlt;
    if (options.spectral) {
      const SpectralFactor& f = *options.spectral;
      solve = [&f, &spec](const Vector& r) -> Vector { return f.solve(spec.prox_weight, spec.penalty_weight, r); };
    } else {
      llt.compute(assemble_system(spec));
      if (llt.info() == Eigen::Success) {
        solve = [&llt](const Vector& r) -> Vector { return llt.solve(r); };
      } else {
        ldlt.compute(assemble_system(spec));
        solve = [&ldlt](const Vector& r) -> Vector { return ldlt.solve(r); };
      }
    }
    Vector x = solve(rhs);
    double stat = stationarity_norm(spec, x);
    for (int it = 0; it < kDirectRefinements && stat > target; ++it) {
      Vector refined = x - solve(subproblem_gradient(spec, x));
      const double refined_stat = stationarity_norm(spec, refined);
      ++sol.inner_iterations;
      if (!(refined_stat < stat)) break;
      x = std::move(refined);
      stat = refined_stat;
    }
    if (stat > effective_target(spec, x, target)) {
      // Factorization accuracy ran out; finish with CG from the refined point.
      IterativeResult cg = conjugate_gradient(spec, std::move(x), target, max_inner(spec, options));
      sol.inner_iterations += cg.iterations;
      if (!cg.converged) {
        throw SubproblemNotConverged("solve_subproblem: direct solve reached stationarity " +
                                         format_double(cg.stationarity) + " > " + format_double(target),
                                     std::move(cg.x), cg.stationarity);
      }
      x = std::move(cg.x);
      stat = cg.stationarity;
    }
    sol.floor_limited = stat > target;
    sol.x_next = std::move(x);
    sol.stationarity_norm = stat;
    return sol;
  }

  IterativeResult res;
  if (method == SubMethod::kConjugateGradient) {
    res = conjugate_gradient(spec, spec.xbar, target, max_inner(spec, options));
  } else {
    const double a_norm =
        p.dim_dual() == 0
            ? 0.0
            : options.constraint_norm.value_or(1.02 * constraint_norm_estimate(p, kNormEstimateIters));
    res = accelerated_gradient(spec, target, max_inner(spec, options), a_norm);
  }
  if (!res.converged) {
    throw SubproblemNotConverged(std::string("solve_subproblem: ") + std::string(to_string(method)) +
                                     " stopped at stationarity " + format_double(res.stationarity) +
                                     " > " + format_double(target) + " after " +
                                     std::to_string(res.iterations) + " iterations",
                                 std::move(res.x), res.stationarity);
  }
  sol.floor_limited = res.stationarity > target;
  sol.x_next = std::move(res.x);
  sol.stationarity_norm = res.stationarity;
  sol.inner_iterations = res.iterations;
  return sol;
}

double constraint_norm_estimate(const Problem& problem, int iters) {
  if (problem.dim_dual() == 0) return 0.0;
  return std::sqrt(power_iteration(
      problem.dim_primal(),
      [&problem](const Vector& v) -> Vector {
        return problem.constraint_adjoint(problem.constraint_matvec(v));
      },
      iters));
}

double hessian_norm_estimate(const Problem& problem, int iters) {
  const auto& q = problem.quadratic_form();
  if (!q) {
    throw Error(ErrorCode::kUnsupportedProblem, "hessian_norm_estimate: problem has no quadratic form");
  }
  if (q->kind == QuadraticForm::Kind::kScaledIdentity) return std::abs(q->scale);
  return power_iteration(problem.dim_primal(), [&q](const Vector& v) -> Vector { return q->apply(v); },
                         iters);
}

double operator_norm_estimate(const Problem& problem, int iters) {
  if (iters < 1) throw Error(ErrorCode::kInvalidParameter, "operator_norm_estimate: iters must be >= 1");
  if (problem.dim_dual() > 0) return constraint_norm_estimate(problem, iters);
  if (problem.quadratic_form()) return hessian_norm_estimate(problem, iters);
  throw Error(ErrorCode::kUnsupportedProblem,
              "operator_norm_estimate: needs constraints or a quadratic objective");
}

}  // namespace aapda
