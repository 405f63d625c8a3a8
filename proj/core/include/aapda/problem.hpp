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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aapda/rng.hpp"

namespace aapda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// f(x) = 1/2 x^T Q x + c^T x + r. Q is either a scaled identity (never
/// materialized) or an explicit dense symmetric matrix.
struct QuadraticForm {
  enum class Kind { kScaledIdentity, kDense };

  Kind kind = Kind::kScaledIdentity;
  double scale = 0.0;
  Matrix matrix;
  Vector linear;
  double constant = 0.0;

  static QuadraticForm scaled_identity(double scale, Index n);
  static QuadraticForm dense(Matrix q, Vector c, double r);

  Index dim() const { return linear.size(); }
  Vector apply(const Vector& x) const;
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const { return apply(x) + linear; }
  Matrix materialize() const;
};

/// Where a problem came from. Ordered key/value parameters so that headers
/// serialize in a stable order.
struct ProblemDescriptor {
  std::string generator = "custom";
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<std::uint64_t> seed;

  std::string param(const std::string& key) const;
};

struct Objective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::optional<QuadraticForm> quadratic;
  std::optional<double> lipschitz;
  /// f(x) = 1/2 ||D x - d||^2 data, kept so that values are evaluated without
  /// the cancellation of the expanded quadratic form and so the instance can
  /// be serialized faithfully.
  std::optional<std::pair<Matrix, Vector>> least_squares;
};

/// Linear map A: R^n -> R^m together with its adjoint.
struct ConstraintOperator {
  Index rows = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> adjoint;
  std::optional<Matrix> dense;

  static ConstraintOperator none();
  static ConstraintOperator from_dense(Matrix a);
};

/// Smooth convex f plus the linear equality constraint A x = b. Immutable
/// after construction; safe to share across threads.
class Problem {
 public:
  Problem(Index dim_primal, Objective objective, ConstraintOperator constraint,
          Vector rhs, ProblemDescriptor descriptor = {});

  /// Builds value/gradient oracles from the quadratic form itself.
  static Problem quadratic(QuadraticForm q, ConstraintOperator constraint,
                           Vector rhs, ProblemDescriptor descriptor = {});
  /// f(x) = 1/2 ||D x - d||^2 with no constraint.
  static Problem least_squares(Matrix d_mat, Vector d_vec,
                               ProblemDescriptor descriptor = {});

  Index dim_primal() const { return n_; }
  Index dim_dual() const { return constraint_.rows; }

  double f_value(const Vector& x) const;
  Vector f_grad(const Vector& x) const;
  const std::optional<QuadraticForm>& quadratic_form() const { return objective_.quadratic; }
  const std::optional<std::pair<Matrix, Vector>>& least_squares_data() const {
    return objective_.least_squares;
  }

  Vector constraint_matvec(const Vector& x) const;
  Vector constraint_adjoint(const Vector& lambda) const;
  const std::optional<Matrix>& constraint_dense() const { return constraint_.dense; }
  /// A^T A, precomputed when the constraint is dense.
  const std::optional<Matrix>& constraint_gram() const { return gram_; }
  const Vector& rhs() const { return rhs_; }

  std::optional<double> lipschitz_hint() const { return objective_.lipschitz; }
  const ProblemDescriptor& descriptor() const { return descriptor_; }

  /// Planted solution recorded by a generator, if any.
  const std::optional<Vector>& planted() const { return planted_; }
  void set_planted(Vector x) { planted_ = std::move(x); }

 private:
  void check_primal(const Vector& x) const;

  Index n_;
  Objective objective_;
  ConstraintOperator constraint_;
  Vector rhs_;
  ProblemDescriptor descriptor_;
  std::optional<Matrix> gram_;
  std::optional<Vector> planted_;
};

/// Certified primal-dual pair.
struct SaddlePoint {
  Vector x_star;
  Vector lambda_star;
  double kkt_residual = 0.0;
};

/// max(||grad f(x) + A^T lambda||, ||A x - b||) recomputed from the oracles.
double kkt_residual(const Problem& problem, const Vector& x, const Vector& lambda);

/// Example 1 instance: f = mu/2 ||x||^2, Gaussian A, b = A x_planted with a
/// clipped, 1%-sparse planted vector.
Problem gen_equality_qp(Index n, Index m, double mu, RngSpec rng);

/// Example 2 instance: f = 1/2 ||A x - b||^2, A with round(density*m*n)
/// nonzeros uniform on [0, 0.1], b uniform on [0, 1]. Unconstrained.
Problem gen_least_squares(Index m, Index n, double density, RngSpec rng);

/// Solves the KKT system of a quadratic problem.
SaddlePoint solve_kkt_saddle(const Problem& problem);

/// Minimum-norm minimizer of ||A x - b||.
Vector min_norm_least_squares(const Matrix& a, const Vector& b);

}  // namespace aapda
