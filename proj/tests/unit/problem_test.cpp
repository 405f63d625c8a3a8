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

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "aapda/error.hpp"
#include "aapda/subsolver.hpp"

namespace aapda {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an aapda::Error";
  return ErrorCode::kInvalidState;
}

TEST(GenEqualityQp, PlantedVectorHasOneClippedEntry) {
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    const Problem p = gen_equality_qp(10, 10, 1.5, RngSpec{seed});
    ASSERT_TRUE(p.planted().has_value());
    const Vector& x = *p.planted();
    int nonzeros = 0;
    for (Index i = 0; i < x.size(); ++i) {
      if (x(i) != 0.0) {
        ++nonzeros;
        EXPECT_LE(std::abs(x(i)), 2.0);
      }
    }
    EXPECT_EQ(nonzeros, 1);
    EXPECT_LE((p.constraint_matvec(x) - p.rhs()).norm(), 1e-12 * (1.0 + p.rhs().norm()));
  }
}

TEST(GenEqualityQp, ZeroMuAnnihilatesObjective) {
  const Problem p = gen_equality_qp(2, 2, 0.0, RngSpec{4});
  const Vector x = Vector::LinSpaced(2, -3.0, 5.0);
  EXPECT_EQ(p.f_value(x), 0.0);
  EXPECT_EQ(p.f_grad(x), Vector::Zero(2));
}

TEST(GenEqualityQp, SameSeedGivesIdenticalData) {
  const Problem a = gen_equality_qp(100, 100, 1.5, RngSpec{17});
  const Problem b = gen_equality_qp(100, 100, 1.5, RngSpec{17});
  EXPECT_TRUE(*a.constraint_dense() == *b.constraint_dense());
  EXPECT_TRUE(a.rhs() == b.rhs());
  const Problem c = gen_equality_qp(100, 100, 1.5, RngSpec{18});
  EXPECT_FALSE(*a.constraint_dense() == *c.constraint_dense());
}

TEST(GenEqualityQp, RejectsEmptyDimensions) {
  EXPECT_EQ(code_of([] { gen_equality_qp(0, 3, 1.0, RngSpec{1}); }), ErrorCode::kInvalidDimension);
  EXPECT_EQ(code_of([] { gen_equality_qp(3, 0, 1.0, RngSpec{1}); }), ErrorCode::kInvalidDimension);
}

TEST(GenLeastSquares, HalfDensityHasExactNonzeroCount) {
  const Problem p = gen_least_squares(500, 1000, 0.5, RngSpec{1});
  ASSERT_TRUE(p.least_squares_data().has_value());
  const Matrix& a = p.least_squares_data()->first;
  EXPECT_EQ(a.rows(), 500);
  EXPECT_EQ(a.cols(), 1000);
  EXPECT_EQ((a.array() != 0.0).count(), 250000);
  EXPECT_EQ(p.dim_dual(), 0);
}

TEST(GenLeastSquares, FullDensityEntriesInRange) {
  const Problem p = gen_least_squares(500, 1000, 1.0, RngSpec{2});
  const Matrix& a = p.least_squares_data()->first;
  EXPECT_GT(a.minCoeff(), 0.0);
  EXPECT_LE(a.maxCoeff(), 0.1);
}

TEST(GenLeastSquares, GradientAtOriginIsMinusAtb) {
  const Problem p = gen_least_squares(2, 2, 1.0, RngSpec{8});
  const auto& [a, b] = *p.least_squares_data();
  EXPECT_LE((p.f_grad(Vector::Zero(2)) + a.transpose() * b).norm(), 1e-15);
}

TEST(GenLeastSquares, RejectsDensityOutsideUnitInterval) {
  EXPECT_EQ(code_of([] { gen_least_squares(5, 5, 0.0, RngSpec{1}); }), ErrorCode::kInvalidParameter);
  EXPECT_EQ(code_of([] { gen_least_squares(5, 5, 1.5, RngSpec{1}); }), ErrorCode::kInvalidParameter);
}

TEST(SolveKktSaddle, IdentityConstraintForcesRhs) {
  const Problem p = Problem::quadratic(QuadraticForm::scaled_identity(1.5, 2),
                                       ConstraintOperator::from_dense(Matrix::Identity(2, 2)),
                                       Vector::LinSpaced(2, 1.0, 2.0));
  const SaddlePoint sp = solve_kkt_saddle(p);
  EXPECT_NEAR(sp.x_star(0), 1.0, 1e-14);
  EXPECT_NEAR(sp.x_star(1), 2.0, 1e-14);
  EXPECT_NEAR(sp.lambda_star(0), -1.5, 1e-14);
  EXPECT_NEAR(sp.lambda_star(1), -3.0, 1e-14);
}

TEST(SolveKktSaddle, UnconstrainedIdentityMinimumIsZero) {
  const Problem p = Problem::quadratic(QuadraticForm::scaled_identity(1.0, 3), ConstraintOperator::none(),
                                       Vector(0));
  const SaddlePoint sp = solve_kkt_saddle(p);
  EXPECT_EQ(sp.x_star, Vector::Zero(3));
  EXPECT_EQ(p.f_value(sp.x_star), 0.0);
}

TEST(SolveKktSaddle, LeastSquaresMatchesNormalEquations) {
  for (double density : {0.5, 1.0}) {
    const Problem p = gen_least_squares(40, 80, density, RngSpec{3});
    const SaddlePoint sp = solve_kkt_saddle(p);
    const auto& [a, b] = *p.least_squares_data();
    const Vector atb = a.transpose() * b;
    EXPECT_LE((a.transpose() * (a * sp.x_star) - atb).norm(), 1e-8 * (1.0 + atb.norm()));
  }
}

TEST(SolveKktSaddle, DenseQuadraticWithConstraints) {
  Matrix q(3, 3);
  q << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  Vector c(3);
  c << 1, -2, 0.5;
  Matrix a(1, 3);
  a << 1, 1, 1;
  Vector b(1);
  b << 1.0;
  const Problem p = Problem::quadratic(QuadraticForm::dense(q, c, 0.0), ConstraintOperator::from_dense(a), b);
  const SaddlePoint sp = solve_kkt_saddle(p);
  // Independent check: the full KKT matrix solved by a dense LU.
  Matrix kkt = Matrix::Zero(4, 4);
  kkt.topLeftCorner(3, 3) = q;
  kkt.topRightCorner(3, 1) = a.transpose();
  kkt.bottomLeftCorner(1, 3) = a;
  Vector rhs(4);
  rhs << -c, b;
  const Vector sol = kkt.fullPivLu().solve(rhs);
  EXPECT_LE((sp.x_star - sol.head(3)).norm(), 1e-12);
  EXPECT_LE((sp.lambda_star - sol.tail(1)).norm(), 1e-12);
}

TEST(SolveKktSaddle, InconsistentConstraintsHaveNoSaddle) {
  Matrix a(2, 2);
  a << 1, 0, 1, 0;
  Vector b(2);
  b << 1, 2;
  const Problem p =
      Problem::quadratic(QuadraticForm::scaled_identity(1.0, 2), ConstraintOperator::from_dense(a), b);
  EXPECT_EQ(code_of([&] { solve_kkt_saddle(p); }), ErrorCode::kNoSaddlePoint);
}

TEST(SolveKktSaddle, RequiresQuadraticForm) {
  Objective obj;
  obj.value = [](const Vector& x) { return x.squaredNorm(); };
  obj.gradient = [](const Vector& x) { return Vector(2.0 * x); };
  const Problem p(2, obj, ConstraintOperator::none(), Vector(0));
  EXPECT_EQ(code_of([&] { solve_kkt_saddle(p); }), ErrorCode::kUnsupportedProblem);
}

TEST(MinNormLeastSquares, UnderdeterminedRow) {
  Matrix a(1, 2);
  a << 1, 0;
  Vector b(1);
  b << 2;
  const Vector x = min_norm_least_squares(a, b);
  EXPECT_NEAR(x(0), 2.0, 1e-15);
  EXPECT_NEAR(x(1), 0.0, 1e-15);
}

TEST(MinNormLeastSquares, IdentityReturnsRhs) {
  const Vector b = Vector::LinSpaced(4, -1.0, 2.0);
  EXPECT_LE((min_norm_least_squares(Matrix::Identity(4, 4), b) - b).norm(), 1e-15);
}

TEST(MinNormLeastSquares, OverdeterminedColumn) {
  Matrix a(2, 1);
  a << 1, 1;
  Vector b(2);
  b << 1, 3;
  EXPECT_NEAR(min_norm_least_squares(a, b)(0), 2.0, 1e-14);
}

TEST(MinNormLeastSquares, DimensionMismatch) {
  EXPECT_EQ(code_of([] { min_norm_least_squares(Matrix::Identity(2, 2), Vector::Zero(3)); }),
            ErrorCode::kInvalidDimension);
}

TEST(OperatorNorm, IdentityAndDiagonal) {
  const Problem id = Problem::quadratic(QuadraticForm::scaled_identity(1.0, 3),
                                       ConstraintOperator::from_dense(Matrix::Identity(3, 3)), Vector::Zero(3));
  EXPECT_NEAR(operator_norm_estimate(id, 100), 1.0, 1e-4);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const Problem diag = Problem::quadratic(QuadraticForm::scaled_identity(1.0, 2),
                                         ConstraintOperator::from_dense(d), Vector::Zero(2));
  EXPECT_NEAR(operator_norm_estimate(diag, 100), 3.0, 1e-4);
}

TEST(OperatorNorm, LeastSquaresMatchesSvd) {
  const Problem p = gen_least_squares(5, 8, 1.0, RngSpec{21});
  const Matrix& a = p.least_squares_data()->first;
  // Unconstrained, so the estimate is ||Q|| = ||A^T A|| = sigma_max(A)^2.
  const double sigma_max = Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
  const double expected = sigma_max * sigma_max;
  EXPECT_NEAR(operator_norm_estimate(p, 200), expected, 1e-3 * expected);
}

TEST(OperatorNorm, ZeroOperatorIsZero) {
  const Problem p = Problem::quadratic(QuadraticForm::scaled_identity(1.0, 2),
                                      ConstraintOperator::from_dense(Matrix::Zero(2, 2)), Vector::Zero(2));
  EXPECT_EQ(operator_norm_estimate(p, 50), 0.0);
}

TEST(KktResidual, ZeroAtSaddle) {
  const Problem p = gen_equality_qp(20, 10, 1.5, RngSpec{5});
  const SaddlePoint sp = solve_kkt_saddle(p);
  EXPECT_LE(kkt_residual(p, sp.x_star, sp.lambda_star), 1e-8 * (1.0 + p.rhs().norm()));
  EXPECT_EQ(sp.kkt_residual, kkt_residual(p, sp.x_star, sp.lambda_star));
}

TEST(Problem, RejectsWrongPrimalDimension) {
  const Problem p = gen_equality_qp(4, 2, 1.0, RngSpec{1});
  EXPECT_EQ(code_of([&] { p.f_value(Vector::Zero(3)); }), ErrorCode::kInvalidDimension);
}

}  // namespace
}  // namespace aapda
