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

#include "aapda/problem.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "aapda/error.hpp"

namespace aapda {

QuadraticForm QuadraticForm::scaled_identity(double scale, Index n) {
  QuadraticForm q;
  q.kind = Kind::kScaledIdentity;
  q.scale = scale;
  q.linear = Vector::Zero(n);
  return q;
}

QuadraticForm QuadraticForm::dense(Matrix q_mat, Vector c, double r) {
  if (q_mat.rows() != q_mat.cols() || q_mat.rows() != c.size()) {
    throw Error(ErrorCode::kInvalidDimension, "quadratic form: Q must be n x n and c of length n");
  }
  QuadraticForm q;
  q.kind = Kind::kDense;
  q.matrix = std::move(q_mat);
  q.linear = std::move(c);
  q.constant = r;
  return q;
}

Vector QuadraticForm::apply(const Vector& x) const {
  if (kind == Kind::kScaledIdentity) return scale * x;
  return matrix * x;
}

double QuadraticForm::value(const Vector& x) const {
  return 0.5 * x.dot(apply(x)) + linear.dot(x) + constant;
}

Matrix QuadraticForm::materialize() const {
  if (kind == Kind::kDense) return matrix;
  return scale * Matrix::Identity(dim(), dim());
}

std::string ProblemDescriptor::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return {};
}

ConstraintOperator ConstraintOperator::none() {
  ConstraintOperator op;
  op.rows = 0;
  return op;
}

ConstraintOperator ConstraintOperator::from_dense(Matrix a) {
  ConstraintOperator op;
  op.rows = a.rows();
  op.dense = std::move(a);
  return op;
}

Problem::Problem(Index dim_primal, Objective objective, ConstraintOperator constraint,
                 Vector rhs, ProblemDescriptor descriptor)
    : n_(dim_primal),
      objective_(std::move(objective)),
      constraint_(std::move(constraint)),
      rhs_(std::move(rhs)),
      descriptor_(std::move(descriptor)) {
  if (n_ < 1) throw Error(ErrorCode::kInvalidDimension, "problem: dim_primal must be >= 1");
  if (constraint_.rows < 0 || rhs_.size() != constraint_.rows) {
    throw Error(ErrorCode::kInvalidDimension, "problem: rhs length must equal the number of constraint rows");
  }
  if (!objective_.value || !objective_.gradient) {
    throw Error(ErrorCode::kInvalidParameter, "problem: objective value and gradient oracles are required");
  }
  if (objective_.quadratic && objective_.quadratic->dim() != n_) {
    throw Error(ErrorCode::kInvalidDimension, "problem: quadratic form dimension mismatch");
  }
  if (objective_.lipschitz && !(*objective_.lipschitz > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "problem: lipschitz hint must be positive");
  }
  if (constraint_.dense) {
    const Matrix& a = *constraint_.dense;
    if (a.cols() != n_ || a.rows() != constraint_.rows) {
      throw Error(ErrorCode::kInvalidDimension, "problem: constraint matrix must be m x n");
    }
    gram_ = a.transpose() * a;
  } else if (constraint_.rows > 0 && (!constraint_.apply || !constraint_.adjoint)) {
    throw Error(ErrorCode::kInvalidParameter, "problem: constraint oracles are required when m > 0");
  }
}

Problem Problem::quadratic(QuadraticForm q, ConstraintOperator constraint, Vector rhs,
                           ProblemDescriptor descriptor) {
  const Index n = q.dim();
  Objective obj;
  obj.quadratic = std::move(q);
  auto form = std::make_shared<const QuadraticForm>(*obj.quadratic);
  obj.value = [form](const Vector& x) { return form->value(x); };
  obj.gradient = [form](const Vector& x) -> Vector { return form->gradient(x); };
  return Problem(n, std::move(obj), std::move(constraint), std::move(rhs), std::move(descriptor));
}

Problem Problem::least_squares(Matrix d_mat, Vector d_vec, ProblemDescriptor descriptor) {
  if (d_mat.rows() != d_vec.size()) {
    throw Error(ErrorCode::kInvalidDimension, "least squares: data matrix rows must match rhs length");
  }
  const Index n = d_mat.cols();
  Matrix q = d_mat.transpose() * d_mat;
  Vector c = -(d_mat.transpose() * d_vec);
  const double r = 0.5 * d_vec.squaredNorm();

  Objective obj;
  obj.quadratic = QuadraticForm::dense(std::move(q), std::move(c), r);
  auto data = std::make_shared<const std::pair<Matrix, Vector>>(d_mat, d_vec);
  obj.least_squares = *data;
  obj.value = [data](const Vector& x) {
    return 0.5 * (data->first * x - data->second).squaredNorm();
  };
  obj.gradient = [data](const Vector& x) -> Vector {
    return data->first.transpose() * (data->first * x - data->second);
  };
  return Problem(n, std::move(obj), ConstraintOperator::none(), Vector(0), std::move(descriptor));
}

void Problem::check_primal(const Vector& x) const {
  if (x.size() != n_) {
    throw Error(ErrorCode::kInvalidDimension,
                "expected primal vector of length " + std::to_string(n_) + ", got " +
                    std::to_string(x.size()));
  }
}

double Problem::f_value(const Vector& x) const {
  check_primal(x);
  return objective_.value(x);
}

Vector Problem::f_grad(const Vector& x) const {
  check_primal(x);
  return objective_.gradient(x);
}

Vector Problem::constraint_matvec(const Vector& x) const {
  check_primal(x);
  if (constraint_.rows == 0) return Vector(0);
  if (constraint_.dense) return *constraint_.dense * x;
  return constraint_.apply(x);
}

Vector Problem::constraint_adjoint(const Vector& lambda) const {
  if (lambda.size() != constraint_.rows) {
    throw Error(ErrorCode::kInvalidDimension,
                "expected dual vector of length " + std::to_string(constraint_.rows) + ", got " +
                    std::to_string(lambda.size()));
  }
  if (constraint_.rows == 0) return Vector::Zero(n_);
  if (constraint_.dense) return constraint_.dense->transpose() * lambda;
  return constraint_.adjoint(lambda);
}

double kkt_residual(const Problem& problem, const Vector& x, const Vector& lambda) {
  const double stationarity =
      (problem.f_grad(x) + problem.constraint_adjoint(lambda)).norm();
  const double feasibility = (problem.constraint_matvec(x) - problem.rhs()).norm();
  return std::max(stationarity, feasibility);
}

}  // namespace aapda
