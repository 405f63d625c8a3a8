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
#include <string_view>
#include <vector>

#include "aapda/error.hpp"
#include "aapda/problem.hpp"

namespace aapda {

/// State of the first-order closed-loop system
///
///   tau' = tau^((q-1)/q) mu^(1/q),      mu = ||grad_x L||^(-(p-1)/p)
///   v'   = -tau' grad_x L(x, lambda)
///   x'   = -(tau'/tau)(x - v) - (tau'^2/tau) grad_x L(x, lambda)
///   lambda' = tau' (A (x + (tau/tau') x') - b)
struct OdeState {
  double t = 1.0;
  Vector x;
  Vector v;
  Vector lambda;
  double tau = 1.0;
};

struct OdeDerivative {
  Vector x;
  Vector v;
  Vector lambda;
  double tau = 0.0;
  double mu = 1.0;
  double grad_norm = 0.0;
};

enum class OdeMethod {
  /// Explicit Dormand-Prince 5(4).
  kDormandPrince,
  /// Linearly implicit Rosenbrock 4(3) with an analytic Jacobian. Use when
  /// tau * mu * ||A||^2 grows large (q > 1 with p > 1).
  kRosenbrock,
};

std::string_view to_string(OdeMethod method);

struct OdeParams {
  OdeMethod method = OdeMethod::kDormandPrince;
  double q = 1.0;
  double p = 1.0;
  double t0 = 1.0;
  double mu_cap = 1e12;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// 0 means unbounded.
  double max_step = 0.0;
  double t_end = 50.0;
  /// Accepted-step budget; exceeding it raises StiffnessError.
  long max_steps = 2'000'000;
  /// Keep x, v and lambda at every accepted step.
  bool record_states = false;
};

void validate(const OdeParams& params);

/// min(||grad||^(-(p-1)/p), mu_cap). Throws kNonpositiveGradient for
/// grad_norm <= 0, which the integrator treats as a stationarity event.
double closed_loop_mu(double grad_norm, double p, double mu_cap = 1e12);

/// tau^((q-1)/q) mu^(1/q).
double tau_dot(double tau, double mu, double q);

/// Time derivative of the state, or nullopt when grad_x L vanishes.
std::optional<OdeDerivative> rhs(const OdeState& state, const OdeParams& params,
                                 const Problem& problem);

/// tau(t0) = t0^q / q^q, v(t0) = x(t0). Empty x or lambda means zero.
OdeState initial_state(const Problem& problem, const OdeParams& params, Vector x0 = {},
                       Vector lambda0 = {});

enum class OdeStop { kEndTime, kStationarity, kSaturation };

std::string_view to_string(OdeStop stop);

/// One accepted integrator step. f_gap, pd_gap and energy need a saddle
/// certificate; energy is tau (L(x, l*) - L*) + 1/2 ||v - x*||^2 + 1/2 ||lambda - l*||^2.
struct TrajectoryRow {
  double t = 0.0;
  std::optional<double> f_gap;
  double feas = 0.0;
  std::optional<double> pd_gap;
  std::optional<double> energy;
  double mu = 0.0;
  double tau = 0.0;
  double tau_dot = 0.0;
  double grad_norm = 0.0;
  bool mu_capped = false;
  Vector x;
  Vector v;
  Vector lambda;
};

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  OdeStop stop = OdeStop::kEndTime;
  OdeState final_state;
  int rejected_steps = 0;
};

/// Raised when the step size underflows or the step budget runs out; carries
/// the last accepted state.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, OdeState last, TrajectoryRecord partial)
      : Error(ErrorCode::kStiffness, what), last_(std::move(last)), partial_(std::move(partial)) {}

  const OdeState& last_state() const { return last_; }
  const TrajectoryRecord& partial() const { return partial_; }

 private:
  OdeState last_;
  TrajectoryRecord partial_;
};

/// Adaptive integration with error control on (x, v, lambda, tau). Rows are
/// written at t0 and at every accepted step. Stops at t_end, when ||grad_x L||
/// drops below 1e-13 (1 + ||grad_x L(t0)||), or after 10 consecutive accepted
/// steps with mu at the cap.
TrajectoryRecord integrate(const Problem& problem, const OdeState& init, const OdeParams& params,
                           const SaddlePoint* saddle = nullptr);

}  // namespace aapda
