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

#include <cmath>
#include <string>

#include "aapda/error.hpp"
#include "aapda/format.hpp"
#include "aapda/problem.hpp"

namespace aapda {
namespace {

constexpr int kRefinementSteps = 2;

Matrix materialize_constraint(const Problem& problem) {
  if (problem.constraint_dense()) return *problem.constraint_dense();
  const Index n = problem.dim_primal();
  Matrix a(problem.dim_dual(), n);
  for (Index j = 0; j < n; ++j) a.col(j) = problem.constraint_matvec(Vector::Unit(n, j));
  return a;
}

// m = 0: the minimum-norm minimizer. Least-squares objectives factor A
// itself so the condition number is not squared.
Vector solve_unconstrained(const Problem& problem, const QuadraticForm& q) {
  if (q.kind == QuadraticForm::Kind::kScaledIdentity) {
    if (q.scale == 0.0) return Vector::Zero(q.dim());
    return -q.linear / q.scale;
  }
  if (const auto& ls = problem.least_squares_data()) return min_norm_least_squares(ls->first, ls->second);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(q.matrix);
  Vector x = cod.solve(-q.linear);
  for (int it = 0; it < kRefinementSteps; ++it) x += cod.solve(-q.linear - q.matrix * x);
  return x;
}

struct KktSolution {
  Vector x;
  Vector lambda;
};

// Q = mu I with mu > 0: eliminate x and solve (A A^T / mu) lambda = -b - A c / mu.
KktSolution solve_schur_scaled_identity(const QuadraticForm& q, const Matrix& a, const Vector& b) {
  const double mu = q.scale;
  const Matrix schur = (a * a.transpose()) / mu;
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(schur);
  const Vector rhs = -b - a * q.linear / mu;
  Vector lambda = cod.solve(rhs);
  for (int it = 0; it < kRefinementSteps; ++it) lambda += cod.solve(rhs - schur * lambda);
  Vector x = -(q.linear + a.transpose() * lambda) / mu;
  return {std::move(x), std::move(lambda)};
}

KktSolution solve_full_kkt(const QuadraticForm& q, const Matrix& a, const Vector& b) {
  const Index n = q.dim();
  const Index m = a.rows();
  Matrix kkt = Matrix::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = q.materialize();
  kkt.topRightCorner(n, m) = a.transpose();
  kkt.bottomLeftCorner(m, n) = a;
  Vector rhs(n + m);
  rhs << -q.linear, b;

  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  Vector z = cod.solve(rhs);
  for (int it = 0; it < kRefinementSteps; ++it) z += cod.solve(rhs - kkt * z);
  return {z.head(n), z.tail(m)};
}

}  // namespace

SaddlePoint solve_kkt_saddle(const Problem& problem) {
  const auto& form = problem.quadratic_form();
  if (!form) {
    throw Error(ErrorCode::kUnsupportedProblem, "solve_kkt_saddle: problem has no quadratic form");
  }
  const Vector& b = problem.rhs();

  SaddlePoint sp;
  if (problem.dim_dual() == 0) {
    sp.x_star = solve_unconstrained(problem, *form);
    sp.lambda_star = Vector(0);
  } else {
    const Matrix a = materialize_constraint(problem);
    KktSolution sol = (form->kind == QuadraticForm::Kind::kScaledIdentity && form->scale > 0.0)
                          ? solve_schur_scaled_identity(*form, a, b)
                          : solve_full_kkt(*form, a, b);
    sp.x_star = std::move(sol.x);
    sp.lambda_star = std::move(sol.lambda);
  }
  sp.kkt_residual = kkt_residual(problem, sp.x_star, sp.lambda_star);
  const double bound = 1e-8 * (1.0 + b.norm());
  if (!std::isfinite(sp.kkt_residual) || sp.kkt_residual > bound) {
    throw Error(ErrorCode::kNoSaddlePoint,
                "solve_kkt_saddle: KKT residual " + format_double(sp.kkt_residual) +
                    " exceeds " + format_double(bound) + "; the system looks inconsistent");
  }
  return sp;
}

Vector min_norm_least_squares(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    throw Error(ErrorCode::kInvalidDimension,
                "min_norm_least_squares: A has " + std::to_string(a.rows()) + " rows but b has length " +
                    std::to_string(b.size()));
  }
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return cod.solve(b);
}

}  // namespace aapda
