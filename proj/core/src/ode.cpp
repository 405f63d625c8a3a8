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
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "aapda/format.hpp"
#include "aapda/lagrangian.hpp"

namespace aapda {

void validate(const OdeParams& p) {
  if (!(p.q >= 1.0)) throw Error(ErrorCode::kInvalidParameter, "ode: q must be >= 1");
  if (!(p.p >= 1.0)) throw Error(ErrorCode::kInvalidParameter, "ode: p must be >= 1");
  if (!(p.t0 > 0.0)) throw Error(ErrorCode::kInvalidParameter, "ode: t0 must be positive");
  if (!(p.t_end > p.t0)) throw Error(ErrorCode::kInvalidParameter, "ode: t_end must exceed t0");
  if (!(p.mu_cap > 0.0)) throw Error(ErrorCode::kInvalidParameter, "ode: mu_cap must be positive");
  if (!(p.rel_tol > 0.0) || !(p.abs_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "ode: tolerances must be positive");
  }
  if (p.max_step < 0.0) throw Error(ErrorCode::kInvalidParameter, "ode: max_step must be >= 0");
  if (p.max_steps < 1) throw Error(ErrorCode::kInvalidParameter, "ode: max_steps must be >= 1");
}

double closed_loop_mu(double grad_norm, double p, double mu_cap) {
  if (!(grad_norm > 0.0)) {
    throw Error(ErrorCode::kNonpositiveGradient, "closed_loop_mu: gradient norm must be positive");
  }
  return std::min(std::pow(grad_norm, -(p - 1.0) / p), mu_cap);
}

double tau_dot(double tau, double mu, double q) {
  return std::pow(tau, (q - 1.0) / q) * std::pow(mu, 1.0 / q);
}

std::optional<OdeDerivative> rhs(const OdeState& s, const OdeParams& params, const Problem& problem) {
  if (!(s.tau > 0.0)) throw Error(ErrorCode::kInvalidState, "ode: tau must be positive");
  const LagrangianEval ev = eval_lagrangian(problem, s.x, s.lambda);
  if (!(ev.grad_x_norm > 0.0)) return std::nullopt;

  OdeDerivative d;
  d.grad_norm = ev.grad_x_norm;
  d.mu = closed_loop_mu(ev.grad_x_norm, params.p, params.mu_cap);
  d.tau = tau_dot(s.tau, d.mu, params.q);
  const double ratio = d.tau / s.tau;
  d.v = -d.tau * ev.grad_x;
  d.x = -ratio * (s.x - s.v) - (d.tau * ratio) * ev.grad_x;
  if (problem.dim_dual() > 0) {
    d.lambda = d.tau * (problem.constraint_matvec(s.x + d.x / ratio) - problem.rhs());
  } else {
    d.lambda = Vector(0);
  }
  return d;
}

OdeState initial_state(const Problem& problem, const OdeParams& params, Vector x0, Vector lambda0) {
  validate(params);
  const Index n = problem.dim_primal();
  const Index m = problem.dim_dual();
  OdeState s;
  s.t = params.t0;
  s.x = x0.size() == 0 ? Vector::Zero(n) : std::move(x0);
  s.lambda = lambda0.size() == 0 ? Vector::Zero(m) : std::move(lambda0);
  if (s.x.size() != n || s.lambda.size() != m) {
    throw Error(ErrorCode::kInvalidDimension, "ode: initial point dimension mismatch");
  }
  s.v = s.x;
  s.tau = std::pow(params.t0, params.q) / std::pow(params.q, params.q);
  return s;
}

std::string_view to_string(OdeMethod method) {
  switch (method) {
    case OdeMethod::kDormandPrince: return "dopri5";
    case OdeMethod::kRosenbrock: return "rosenbrock4";
  }
  return "unknown";
}

std::string_view to_string(OdeStop stop) {
  switch (stop) {
    case OdeStop::kEndTime: return "end-time";
    case OdeStop::kStationarity: return "stationarity";
    case OdeStop::kSaturation: return "saturation";
  }
  return "unknown";
}

namespace {

// Flat layout [x | v | lambda | tau].
struct Packing {
  Index n;
  Index m;

  Index size() const { return 2 * n + m + 1; }

  Vector pack(const OdeState& s) const {
    Vector y(size());
    y << s.x, s.v, s.lambda, s.tau;
    return y;
  }
  Vector pack(const OdeDerivative& d) const {
    Vector y(size());
    y << d.x, d.v, d.lambda, d.tau;
    return y;
  }
  OdeState unpack(double t, const Vector& y) const {
    OdeState s;
    s.t = t;
    s.x = y.head(n);
    s.v = y.segment(n, n);
    s.lambda = y.segment(2 * n, m);
    s.tau = y(size() - 1);
    return s;
  }
};

// Dormand-Prince coefficients.
constexpr std::array<double, 6> kC = {1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
// Fifth-order minus embedded fourth-order weights.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

TrajectoryRow make_row(const Problem& problem, const OdeParams& params, const SaddlePoint* saddle,
                       const OdeState& s, const OdeDerivative& d) {
  TrajectoryRow row;
  row.t = s.t;
  row.feas = problem.dim_dual() > 0 ? (problem.constraint_matvec(s.x) - problem.rhs()).norm() : 0.0;
  row.mu = d.mu;
  row.tau = s.tau;
  row.tau_dot = d.tau;
  row.grad_norm = d.grad_norm;
  row.mu_capped = d.mu >= params.mu_cap;
  if (saddle != nullptr) {
    const double gap = pd_gap(problem, s.x, *saddle);
    row.pd_gap = gap;
    row.f_gap = std::abs(objective_gap(problem, s.x, saddle->x_star));
    row.energy = s.tau * gap + 0.5 * (s.v - saddle->x_star).squaredNorm() +
                 0.5 * (s.lambda - saddle->lambda_star).squaredNorm();
  }
  if (params.record_states) {
    row.x = s.x;
    row.v = s.v;
    row.lambda = s.lambda;
  }
  return row;
}

// Row for a start that is already stationary: the flow is at rest, so every
// rate is zero and mu sits at its limit.
TrajectoryRow stationary_row(const Problem& problem, const OdeParams& params, const SaddlePoint* saddle,
                             const OdeState& s) {
  OdeDerivative d;
  d.x = Vector::Zero(s.x.size());
  d.v = Vector::Zero(s.v.size());
  d.lambda = Vector::Zero(s.lambda.size());
  d.mu = params.p == 1.0 ? 1.0 : params.mu_cap;
  d.tau = tau_dot(s.tau, d.mu, params.q);
  return make_row(problem, params, saddle, s, d);
}

// Bookkeeping shared by both integrators after an accepted step. Returns true
// when integration should stop.
class StopMonitor {
 public:
  StopMonitor(const OdeParams& params, double grad_norm_0)
      : params_(params), stationary_(1e-13 * (1.0 + grad_norm_0)) {}

  bool accept(TrajectoryRecord& rec, const OdeState& s, TrajectoryRow row) {
    const bool capped = row.mu_capped;
    const double grad_norm = row.grad_norm;
    rec.rows.push_back(std::move(row));
    rec.final_state = s;
    if (grad_norm < stationary_) {
      rec.stop = OdeStop::kStationarity;
      return true;
    }
    capped_run_ = capped ? capped_run_ + 1 : 0;
    if (capped_run_ >= 10) {
      rec.stop = OdeStop::kSaturation;
      return true;
    }
    if (static_cast<long>(rec.rows.size()) > params_.max_steps) {
      throw StiffnessError("ode: " + std::to_string(params_.max_steps) + " accepted steps used by t = " +
                               format_double(s.t) + "; the system is stiff here, try the rosenbrock4 method",
                           s, std::move(rec));
    }
    return false;
  }

 private:
  const OdeParams& params_;
  double stationary_;
  int capped_run_ = 0;
};

class Integrator {
 public:
  Integrator(const Problem& problem, const OdeParams& params, const SaddlePoint* saddle)
      : problem_(problem), params_(params), saddle_(saddle),
        pack_{problem.dim_primal(), problem.dim_dual()} {}

  TrajectoryRecord run(const OdeState& init);

 private:
  // Returns false at a stationarity event.
  bool eval(double t, const Vector& y, Vector& dy, OdeDerivative* info = nullptr) const {
    auto d = rhs(pack_.unpack(t, y), params_, problem_);
    if (!d) return false;
    dy = pack_.pack(*d);
    if (info != nullptr) *info = std::move(*d);
    return true;
  }

  const Problem& problem_;
  const OdeParams& params_;
  const SaddlePoint* saddle_;
  Packing pack_;
};

TrajectoryRecord Integrator::run(const OdeState& init) {
  validate(params_);
  if (init.x.size() != pack_.n || init.v.size() != pack_.n || init.lambda.size() != pack_.m) {
    throw Error(ErrorCode::kInvalidDimension, "ode: state dimension mismatch");
  }
  TrajectoryRecord rec;
  double t = init.t;
  Vector y = pack_.pack(init);
  rec.final_state = init;

  Vector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size()),
      k7(y.size());
  OdeDerivative info;
  if (!eval(t, y, k1, &info)) {
    rec.stop = OdeStop::kStationarity;
    rec.rows.push_back(stationary_row(problem_, params_, saddle_, init));
    return rec;
  }
  StopMonitor monitor(params_, info.grad_norm);
  rec.rows.push_back(make_row(problem_, params_, saddle_, init, info));

  auto scale_of = [&](const Vector& a, const Vector& b) {
    return (params_.abs_tol + params_.rel_tol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };

  // Initial step from the usual two-derivative heuristic.
  double h;
  {
    const Vector sc = scale_of(y, y);
    const double d0 = (y.array() / sc.array()).matrix().norm() / std::sqrt(double(y.size()));
    const double d1 = (k1.array() / sc.array()).matrix().norm() / std::sqrt(double(y.size()));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, params_.t_end - t);
    if (params_.max_step > 0.0) h = std::min(h, params_.max_step);
  }

  const double min_step_factor = 16.0 * std::numeric_limits<double>::epsilon();
  bool last_rejected = false;
  while (t < params_.t_end) {
    if (h < min_step_factor * std::max(std::abs(t), 1.0)) {
      throw StiffnessError("ode: step size underflow at t = " + format_double(t),
                           pack_.unpack(t, y), std::move(rec));
    }
    h = std::min(h, params_.t_end - t);

    bool ok = eval(t + kC[0] * h, y + h * (kA21 * k1), k2) &&
              eval(t + kC[1] * h, y + h * (kA31 * k1 + kA32 * k2), k3) &&
              eval(t + kC[2] * h, y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3), k4) &&
              eval(t + kC[3] * h, y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4), k5) &&
              eval(t + kC[4] * h,
                   y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5), k6);
    if (!ok) {
      // A stage landed exactly on a critical point; retry with a smaller step.
      h *= 0.5;
      last_rejected = true;
      ++rec.rejected_steps;
      continue;
    }
    const Vector y_new = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    OdeDerivative info_new;
    if (!eval(t + h, y_new, k7, &info_new)) {
      t += h;
      y = y_new;
      rec.stop = OdeStop::kStationarity;
      rec.final_state = pack_.unpack(t, y);
      return rec;
    }
    const Vector err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
    const double err_norm =
        (err.array() / scale_of(y, y_new).array()).matrix().norm() / std::sqrt(double(y.size()));
    if (!std::isfinite(err_norm) || err_norm > 1.0) {
      const double factor = std::isfinite(err_norm) ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.2;
      h *= factor;
      last_rejected = true;
      ++rec.rejected_steps;
      continue;
    }

    t += h;
    y = y_new;
    k1 = k7;
    const OdeState s = pack_.unpack(t, y);
    if (monitor.accept(rec, s, make_row(problem_, params_, saddle_, s, info_new))) return rec;

    double factor = err_norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err_norm, -0.2));
    if (last_rejected) factor = std::min(factor, 1.0);
    last_rejected = false;
    h *= std::max(factor, 0.2);
    if (params_.max_step > 0.0) h = std::min(h, params_.max_step);
  }
  rec.stop = OdeStop::kEndTime;
  return rec;
}


struct StationaryHit {};

Matrix dense_constraint(const Problem& problem) {
  if (problem.constraint_dense()) return *problem.constraint_dense();
  const Index n = problem.dim_primal();
  Matrix a(problem.dim_dual(), n);
  for (Index j = 0; j < n; ++j) a.col(j) = problem.constraint_matvec(Vector::Unit(n, j));
  return a;
}

// Hessian of f: exact for quadratics, central differences of the gradient
// otherwise.
Matrix hessian(const Problem& problem, const Vector& x) {
  if (problem.quadratic_form()) return problem.quadratic_form()->materialize();
  const Index n = x.size();
  Matrix h(n, n);
  for (Index j = 0; j < n; ++j) {
    const double step = 1e-5 * std::max(1.0, std::abs(x(j)));
    Vector xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    h.col(j) = (problem.f_grad(xp) - problem.f_grad(xm)) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

// Shampine's L-stable Rosenbrock 4(3) coefficients.
struct RosenbrockTableau {
  static constexpr double kGamma = 0.25;
  static constexpr double kA21 = 1.544;
  static constexpr double kA31 = 0.9466785280815826, kA32 = 0.2557011698983284;
  static constexpr double kA41 = 3.314825187068521, kA42 = 2.896124015972201,
                          kA43 = 0.9986419139977817;
  static constexpr double kA51 = 1.221224509226641, kA52 = 6.019134481288629,
                          kA53 = 12.53708332932087, kA54 = -0.6878860361058950;
  static constexpr double kC21 = -5.6688;
  static constexpr double kC31 = -2.430093356833875, kC32 = -0.2063599157091915;
  static constexpr double kC41 = -0.1073529058151375, kC42 = -9.594562251023355,
                          kC43 = -20.47028614809616;
  static constexpr double kC51 = 7.496443313967647, kC52 = -10.24680431464352,
                          kC53 = -33.99990352819905, kC54 = 11.70890893206160;
  static constexpr double kC61 = 8.083246795921522, kC62 = -7.981132988064893,
                          kC63 = -31.52159432874371, kC64 = 16.31930543123136,
                          kC65 = -6.058818238834054;
};

class RosenbrockIntegrator {
 public:
  RosenbrockIntegrator(const Problem& problem, const OdeParams& params, const SaddlePoint* saddle)
      : problem_(problem), params_(params), saddle_(saddle),
        pack_{problem.dim_primal(), problem.dim_dual()}, a_(dense_constraint(problem)) {}

  TrajectoryRecord run(const OdeState& init);

 private:
  Vector derivative(const Vector& y) const {
    auto d = rhs(pack_.unpack(0.0, y), params_, problem_);
    if (!d) throw StationaryHit{};
    return pack_.pack(*d);
  }

  Matrix jacobian(const Vector& y) const;

  // One step of size h from y. Fills y_new and the local error estimate.
  void step(const Vector& y, double h, Vector& y_new, Vector& err) const;

  const Problem& problem_;
  const OdeParams& params_;
  const SaddlePoint* saddle_;
  Packing pack_;
  Matrix a_;
};

// Chain rule through g = grad f(x) + A^T lambda, T = tau', rho = T / tau, using
// lambda' = T (A (v - T g) - b), which equals the defining expression.
Matrix RosenbrockIntegrator::jacobian(const Vector& y) const {
  const Index n = pack_.n, m = pack_.m, size = pack_.size();
  const OdeState s = pack_.unpack(0.0, y);
  const LagrangianEval ev = eval_lagrangian(problem_, s.x, s.lambda);
  if (!(ev.grad_x_norm > 0.0)) throw StationaryHit{};
  const Vector& g = ev.grad_x;
  const double r = ev.grad_x_norm;
  const double mu = closed_loop_mu(r, params_.p, params_.mu_cap);
  const double big_t = tau_dot(s.tau, mu, params_.q);
  const double rho = big_t / s.tau;

  // dg / dy.
  Matrix dg = Matrix::Zero(n, size);
  dg.leftCols(n) = hessian(problem_, s.x);
  if (m > 0) dg.middleCols(2 * n, m) = a_.transpose();

  // dT / dy; mu is constant on the capped branch.
  const double a_exp = (params_.p - 1.0) / params_.p;
  const Vector w = mu >= params_.mu_cap ? Vector::Zero(n)
                                        : Vector(-(a_exp * big_t / (params_.q * r * r)) * g);
  Eigen::RowVectorXd dt_row = w.transpose() * dg;
  dt_row(size - 1) += ((params_.q - 1.0) / params_.q) * rho;

  Eigen::RowVectorXd drho = dt_row / s.tau;
  drho(size - 1) -= rho / s.tau;

  Matrix j(size, size);
  // x' = -rho (x - v) - T rho g.
  j.topRows(n) = -(s.x - s.v) * drho - g * (rho * dt_row + big_t * drho) - (big_t * rho) * dg;
  j.topRows(n).leftCols(n).diagonal().array() -= rho;
  j.topRows(n).middleCols(n, n).diagonal().array() += rho;
  // v' = -T g.
  j.middleRows(n, n) = -g * dt_row - big_t * dg;
  // lambda' = T (A (v - T g) - b).
  if (m > 0) {
    const Vector c = a_ * (s.v - big_t * g) - problem_.rhs();
    j.middleRows(2 * n, m) = (c - big_t * (a_ * g)) * dt_row - (big_t * big_t) * (a_ * dg);
    j.middleRows(2 * n, m).middleCols(n, n) += big_t * a_;
  }
  j.row(size - 1) = dt_row;
  return j;
}

void RosenbrockIntegrator::step(const Vector& y, double h, Vector& y_new, Vector& err) const {
  using T = RosenbrockTableau;
  Matrix w = -jacobian(y);
  w.diagonal().array() += 1.0 / (T::kGamma * h);
  const Eigen::PartialPivLU<Matrix> lu(w);

  const Vector g1 = lu.solve(derivative(y));
  const Vector g2 = lu.solve(derivative(y + T::kA21 * g1) + (T::kC21 / h) * g1);
  const Vector g3 =
      lu.solve(derivative(y + T::kA31 * g1 + T::kA32 * g2) + (T::kC31 * g1 + T::kC32 * g2) / h);
  const Vector g4 = lu.solve(derivative(y + T::kA41 * g1 + T::kA42 * g2 + T::kA43 * g3) +
                             (T::kC41 * g1 + T::kC42 * g2 + T::kC43 * g3) / h);
  const Vector base = y + T::kA51 * g1 + T::kA52 * g2 + T::kA53 * g3 + T::kA54 * g4;
  const Vector g5 =
      lu.solve(derivative(base) + (T::kC51 * g1 + T::kC52 * g2 + T::kC53 * g3 + T::kC54 * g4) / h);
  const Vector y_mid = base + g5;
  err = lu.solve(derivative(y_mid) +
                 (T::kC61 * g1 + T::kC62 * g2 + T::kC63 * g3 + T::kC64 * g4 + T::kC65 * g5) / h);
  y_new = y_mid + err;
}

TrajectoryRecord RosenbrockIntegrator::run(const OdeState& init) {
  validate(params_);
  if (init.x.size() != pack_.n || init.v.size() != pack_.n || init.lambda.size() != pack_.m) {
    throw Error(ErrorCode::kInvalidDimension, "ode: state dimension mismatch");
  }
  TrajectoryRecord rec;
  rec.final_state = init;
  auto first = rhs(init, params_, problem_);
  if (!first) {
    rec.stop = OdeStop::kStationarity;
    rec.rows.push_back(stationary_row(problem_, params_, saddle_, init));
    return rec;
  }
  StopMonitor monitor(params_, first->grad_norm);
  rec.rows.push_back(make_row(problem_, params_, saddle_, init, *first));

  Vector y = pack_.pack(init);
  Vector y_new, err;
  double t = init.t;
  double h = std::min(1e-3 * std::max(1.0, std::abs(t)), params_.t_end - t);
  const double min_step_factor = 16.0 * std::numeric_limits<double>::epsilon();
  // Predictive step control state.
  bool first_step = true, last_rejected = false;
  double err_old = 0.0, h_old = 0.0;
  constexpr double kSafe = 0.9, kGrow = 5.0, kShrink = 1.0 / 6.0;

  while (t < params_.t_end) {
    if (h < min_step_factor * std::max(std::abs(t), 1.0)) {
      throw StiffnessError("ode: step size underflow at t = " + format_double(t), pack_.unpack(t, y),
                           std::move(rec));
    }
    if (params_.max_step > 0.0) h = std::min(h, params_.max_step);
    const bool final_step = h >= params_.t_end - t;
    if (final_step) h = params_.t_end - t;

    double err_norm;
    try {
      step(y, h, y_new, err);
      const Vector scale =
          (params_.abs_tol + params_.rel_tol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).matrix();
      err_norm = (err.array() / scale.array()).matrix().norm() / std::sqrt(double(y.size()));
    } catch (const StationaryHit&) {
      h *= 0.5;
      last_rejected = true;
      ++rec.rejected_steps;
      continue;
    }
    if (!std::isfinite(err_norm) || !(y_new(y_new.size() - 1) > 0.0)) {
      h *= kShrink;
      last_rejected = true;
      ++rec.rejected_steps;
      continue;
    }
    double fac = std::clamp(std::pow(err_norm, 0.25) / kSafe, kShrink, kGrow);
    if (err_norm > 1.0) {
      h /= fac;
      last_rejected = true;
      ++rec.rejected_steps;
      continue;
    }
    if (!first_step) {
      const double pred =
          std::clamp((h_old / h) * std::pow(err_norm * err_norm / err_old, 0.25) / kSafe, kShrink, kGrow);
      fac = std::max(fac, pred);
    }
    first_step = false;
    h_old = h;
    err_old = std::max(0.01, err_norm);
    double h_next = h / fac;
    if (last_rejected) h_next = std::min(h_next, h);
    last_rejected = false;

    t = final_step ? params_.t_end : t + h;
    y = y_new;
    h = h_next;
    const OdeState s = pack_.unpack(t, y);
    auto d = rhs(s, params_, problem_);
    if (!d) {
      rec.stop = OdeStop::kStationarity;
      rec.final_state = s;
      return rec;
    }
    if (monitor.accept(rec, s, make_row(problem_, params_, saddle_, s, *d))) return rec;
  }
  rec.stop = OdeStop::kEndTime;
  return rec;
}

}  // namespace

TrajectoryRecord integrate(const Problem& problem, const OdeState& init, const OdeParams& params,
                           const SaddlePoint* saddle) {
  if (params.method == OdeMethod::kRosenbrock) {
    RosenbrockIntegrator integrator(problem, params, saddle);
    return integrator.run(init);
  }
  Integrator integrator(problem, params, saddle);
  return integrator.run(init);
}

}  // namespace aapda
