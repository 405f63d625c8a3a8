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

#include "aapda/ode.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "aapda/metrics.hpp"

namespace aapda {
namespace {

Problem scalar_half_square() {
  return Problem::quadratic(QuadraticForm::scaled_identity(1.0, 1), ConstraintOperator::none(), Vector(0));
}

TEST(ClosedLoopMu, Values) {
  EXPECT_DOUBLE_EQ(closed_loop_mu(1.0, 3.0), 1.0);
  EXPECT_DOUBLE_EQ(closed_loop_mu(4.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(closed_loop_mu(1e-30, 2.0, 1e12), 1e12);
  EXPECT_THROW(closed_loop_mu(0.0, 2.0), Error);
}

TEST(TauDot, Values) {
  EXPECT_DOUBLE_EQ(tau_dot(7.0, 0.25, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(tau_dot(4.0, 9.0, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(tau_dot(3.0, 1.0, 1.0), 1.0);
}

TEST(InitialState, TauStartsAtClosedForm) {
  const Problem p = gen_equality_qp(2, 2, 1.5, RngSpec{1});
  OdeParams params;
  params.q = 1.0;
  params.t0 = 2.5;
  params.t_end = 10.0;
  EXPECT_DOUBLE_EQ(initial_state(p, params).tau, 2.5);
  params.q = 2.0;
  EXPECT_DOUBLE_EQ(initial_state(p, params).tau, 2.5 * 2.5 / 4.0);
  const OdeState s = initial_state(p, params, Vector::Ones(2));
  EXPECT_EQ(s.v, s.x);
  EXPECT_EQ(s.lambda, Vector::Zero(2));
}

TEST(Rhs, ScalarHandExample) {
  OdeParams params;
  OdeState s;
  s.t = 1.0;
  s.tau = 1.0;
  s.x = Vector::Constant(1, 1.0);
  s.v = Vector::Constant(1, 0.0);
  s.lambda = Vector(0);
  const auto d = rhs(s, params, scalar_half_square());
  ASSERT_TRUE(d.has_value());
  EXPECT_DOUBLE_EQ(d->v(0), -1.0);
  EXPECT_DOUBLE_EQ(d->x(0), -2.0);
  EXPECT_DOUBLE_EQ(d->tau, 1.0);
  EXPECT_DOUBLE_EQ(d->mu, 1.0);
}

TEST(Rhs, NoMixingWhenPositionsCoincide) {
  OdeParams params;
  params.q = 2.0;
  params.p = 3.0;
  OdeState s;
  s.tau = 2.0;
  s.x = Vector::Constant(1, 0.5);
  s.v = s.x;
  s.lambda = Vector(0);
  const auto d = rhs(s, params, scalar_half_square());
  ASSERT_TRUE(d.has_value());
  EXPECT_NEAR(d->x(0), -(d->tau * d->tau / s.tau) * 0.5, 1e-15);
}

TEST(Rhs, StationaryPointHasNoDerivative) {
  OdeParams params;
  OdeState s;
  s.tau = 1.0;
  s.x = Vector::Zero(1);
  s.v = Vector::Constant(1, 3.0);
  s.lambda = Vector(0);
  EXPECT_FALSE(rhs(s, params, scalar_half_square()).has_value());
}

TEST(Rhs, DualRateUsesFreshVelocity) {
  const Problem p = gen_equality_qp(3, 2, 1.5, RngSpec{2});
  OdeParams params;
  params.q = 2.0;
  params.p = 3.0;
  OdeState s;
  s.tau = 1.7;
  s.x = Vector::LinSpaced(3, -1.0, 1.0);
  s.v = Vector::LinSpaced(3, 0.5, 2.0);
  s.lambda = Vector::LinSpaced(2, 1.0, -1.0);
  const auto d = rhs(s, params, p);
  ASSERT_TRUE(d.has_value());
  const Vector g = p.f_grad(s.x) + p.constraint_adjoint(s.lambda);
  const Vector expected = d->tau * (p.constraint_matvec(s.v - d->tau * g) - p.rhs());
  EXPECT_LE((d->lambda - expected).norm(), 1e-12 * (1.0 + expected.norm()));
}

TEST(Rhs, RejectsNonpositiveTau) {
  OdeState s;
  s.tau = 0.0;
  s.x = Vector::Ones(1);
  s.v = s.x;
  s.lambda = Vector(0);
  try {
    rhs(s, OdeParams{}, scalar_half_square());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidState);
  }
}

TEST(Integrate, EquilibriumStaysPut) {
  const Problem p = gen_equality_qp(2, 2, 1.5, RngSpec{1});
  const SaddlePoint sp = solve_kkt_saddle(p);
  OdeParams params;
  params.t_end = 10.0;
  const OdeState init = initial_state(p, params, sp.x_star, sp.lambda_star);
  const TrajectoryRecord rec = integrate(p, init, params, &sp);
  ASSERT_FALSE(rec.rows.empty());
  EXPECT_LE(*rec.rows.front().energy, 1e-20);
  for (const TrajectoryRow& r : rec.rows) EXPECT_LE(*r.f_gap, 1e-10);
  EXPECT_LE((rec.final_state.x - sp.x_star).norm(), 1e-9);
}

class IntegrateBothMethods : public ::testing::TestWithParam<OdeMethod> {};

TEST_P(IntegrateBothMethods, OpenLoopDissipatesEnergy) {
  const Problem p = gen_equality_qp(2, 2, 1.5, RngSpec{1});
  const SaddlePoint sp = solve_kkt_saddle(p);
  OdeParams params;
  params.method = GetParam();
  params.t_end = 51.0;
  const TrajectoryRecord rec = integrate(p, initial_state(p, params, Vector::Ones(2)), params, &sp);
  std::vector<double> energy;
  for (const TrajectoryRow& r : rec.rows) {
    energy.push_back(*r.energy);
    EXPECT_DOUBLE_EQ(r.mu, 1.0);
    EXPECT_NEAR(r.tau, r.t, 1e-9 * r.t);
  }
  EXPECT_TRUE(energy_monotonicity(energy, 1e-8 * (1.0 + energy.front())).empty());
}

INSTANTIATE_TEST_SUITE_P(Methods, IntegrateBothMethods,
                         ::testing::Values(OdeMethod::kDormandPrince, OdeMethod::kRosenbrock),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Integrate, MethodsAgreeOnOpenLoop) {
  const Problem p = gen_equality_qp(3, 2, 1.5, RngSpec{5});
  OdeParams params;
  params.t_end = 10.0;
  params.rel_tol = 1e-10;
  params.abs_tol = 1e-12;
  const OdeState init = initial_state(p, params, Vector::Ones(3));
  const TrajectoryRecord dp = integrate(p, init, params);
  params.method = OdeMethod::kRosenbrock;
  const TrajectoryRecord rb = integrate(p, init, params);
  EXPECT_DOUBLE_EQ(dp.final_state.t, 10.0);
  EXPECT_DOUBLE_EQ(rb.final_state.t, 10.0);
  EXPECT_LE((dp.final_state.x - rb.final_state.x).norm(), 1e-6);
  EXPECT_LE((dp.final_state.lambda - rb.final_state.lambda).norm(), 1e-6);
}

TEST(Integrate, TauMatchesQuadratureOfMu) {
  // tau^(1/q) = (t0 + int mu^(1/q)) / q; checked by a trapezoid rule over
  // the recorded rows.
  const Problem p = gen_equality_qp(2, 2, 1.5, RngSpec{1});
  OdeParams params;
  params.q = 1.5;
  params.p = 2.0;
  params.t_end = 5.0;
  params.max_step = 1e-3;
  const TrajectoryRecord rec = integrate(p, initial_state(p, params, Vector::Ones(2)), params);
  double integral = 0.0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    const auto& a = rec.rows[i - 1];
    const auto& b = rec.rows[i];
    integral += 0.5 * (b.t - a.t) * (std::pow(a.mu, 1.0 / params.q) + std::pow(b.mu, 1.0 / params.q));
    const double closed = std::pow((params.t0 + integral) / params.q, params.q);
    ASSERT_NEAR(b.tau, closed, 1e-6 * closed) << "t = " << b.t;
  }
}

TEST(Integrate, StiffCaseStaysBoundedWithRosenbrock) {
  const Problem p = gen_equality_qp(2, 2, 1.5, RngSpec{1});
  const SaddlePoint sp = solve_kkt_saddle(p);
  OdeParams params;
  params.method = OdeMethod::kRosenbrock;
  params.q = 2.0;
  params.p = 3.0;
  params.t_end = 100.0;
  params.record_states = true;
  const OdeState init = initial_state(p, params, Vector::Ones(2));
  const TrajectoryRecord rec = integrate(p, init, params, &sp);
  const double bound = 1e3 * (1.0 + init.x.norm() + init.lambda.norm());
  for (const TrajectoryRow& r : rec.rows) {
    ASSERT_LE(r.x.norm(), bound);
    ASSERT_LE(r.lambda.norm(), bound);
  }
  EXPECT_LT(*rec.rows.back().f_gap, 1e-6);
}

TEST(Integrate, StepBudgetRaisesStiffness) {
  const Problem p = gen_equality_qp(2, 2, 1.5, RngSpec{1});
  OdeParams params;
  params.max_steps = 5;
  params.t_end = 50.0;
  try {
    integrate(p, initial_state(p, params, Vector::Ones(2)), params);
    FAIL();
  } catch (const StiffnessError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStiffness);
    EXPECT_GT(e.last_state().t, params.t0);
    EXPECT_FALSE(e.partial().rows.empty());
  }
}

TEST(Validate, RejectsBadParams) {
  OdeParams params;
  params.q = 0.5;
  EXPECT_THROW(validate(params), Error);
  params = OdeParams{};
  params.t_end = params.t0;
  EXPECT_THROW(validate(params), Error);
  params = OdeParams{};
  params.max_steps = 0;
  EXPECT_THROW(validate(params), Error);
}

}  // namespace
}  // namespace aapda
