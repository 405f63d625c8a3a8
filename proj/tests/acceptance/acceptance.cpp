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

// Acceptance suite: checks the twelve release criteria at their stated
// tolerances and prints one PASS/FAIL line per criterion. Exits 0 iff the set
// of failing criteria equals the --expect-fail set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"
#include "aapda/baselines.hpp"
#include "aapda/lagrangian.hpp"
#include "aapda/metrics.hpp"
#include "aapda/ode.hpp"
#include "aapda/solver.hpp"
#include "aapda/subsolver.hpp"
#include "bench/config.hpp"
#include "bench/experiment.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using aapda::Index;
using aapda::Matrix;
using aapda::Vector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

aapda::Problem example1(Index n, Index m, std::uint64_t seed = 1) {
  return aapda::gen_equality_qp(n, m, 1.5, aapda::RngSpec{seed});
}

aapda::AapdaOptions example1_options(Index n, aapda::PSchedule p) {
  aapda::AapdaOptions o;
  o.p = p;
  o.gamma_1 = 1.0;
  o.stop_theta = 1e-6;
  o.max_iterations = 100;
  o.x_init = Vector::Ones(n);
  return o;
}

struct IterateView {
  std::vector<Vector> x;       // x_1 .. x_{K+1}
  std::vector<Vector> lambda;  // lambda_1 .. lambda_{K+1}
  std::vector<double> gamma;   // gamma_1 .. gamma_{K+1}
  std::vector<double> tau;     // tau_1 .. tau_{K+1}
};

// Re-indexes a trace so that entry j holds iteration j + 1.
IterateView view_of(const aapda::Trace& t, double gamma_1) {
  IterateView v;
  v.gamma.push_back(gamma_1);
  v.tau.push_back(0.0);
  for (const aapda::TraceRecord& r : t.records) {
    v.x.push_back(r.x);
    v.lambda.push_back(r.lambda);
    v.gamma.push_back(*r.gamma_next);
    v.tau.push_back(*r.tau_next);
  }
  v.x.push_back(t.x_final);
  v.lambda.push_back(t.lambda_final);
  return v;
}

// ---------------------------------------------------------------------------

Outcome closed_loop_identity() {
  double worst = 0.0;
  std::size_t rows = 0;
  for (double p : {4.0, 5.0}) {
    const aapda::Problem prob = example1(10, 10);
    const aapda::Trace t = aapda::run(prob, example1_options(10, aapda::PSchedule::constant(p)));
    for (const aapda::TraceRecord& r : t.records) {
      worst = std::max(worst, std::abs(std::pow(*r.mu, p) * std::pow(r.grad_norm, p - 1.0) - 1.0));
      ++rows;
    }
  }
  return {rows > 0 && worst <= 1e-10,
          "max |mu^p ||grad||^(p-1) - 1| = " + sci(worst) + " over " + std::to_string(rows) + " iterations"};
}

Outcome recurrences() {
  using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  bool exact = true;
  double worst_tel = 0.0;
  std::size_t checks = 0;
  for (const aapda::PSchedule& sched :
       {aapda::PSchedule::constant(4.0), aapda::PSchedule::constant(5.0), aapda::PSchedule::iteration_index()}) {
    const aapda::Problem prob = example1(10, 10);
    const aapda::AapdaOptions opts = example1_options(10, sched);
    const aapda::Trace t = aapda::run(prob, opts);
    const IterateView v = view_of(t, opts.gamma_1);
    for (std::size_t j = 0; j < t.records.size(); ++j) {
      const aapda::TraceRecord& r = t.records[j];
      exact &= (*r.tau_next == v.gamma[j] + v.tau[j]);
      exact &= (*r.gamma_next == *r.mu);
    }
    // lambda_{k+1} - lambda_1 = tau_{k+2} (A x_{k+1} - b) - tau_2 (A x_1 - b),
    // evaluated in extended precision on the recorded iterates.
    const LongMatrix a = prob.constraint_dense()->cast<long double>();
    const LongVector b = prob.rhs().cast<long double>();
    const LongVector r1 = a * v.x[0].cast<long double>() - b;
    const long double tau2 = v.tau[1];
    for (std::size_t j = 1; j < v.x.size(); ++j) {
      const long double tau_after = static_cast<long double>(v.gamma[j]) + v.tau[j];
      const LongVector rj = a * v.x[j].cast<long double>() - b;
      const LongVector lhs = (v.lambda[j] - v.lambda[0]).cast<long double>();
      const LongVector rhs = tau_after * rj - tau2 * r1;
      const long double scale =
          std::max({lhs.norm(), (tau_after * rj).norm(), (tau2 * r1).norm(), 1e-300L});
      worst_tel = std::max(worst_tel, static_cast<double>((lhs - rhs).norm() / scale));
      ++checks;
    }
  }
  return {exact && worst_tel <= 1e-10,
          std::string("scaling recurrences ") + (exact ? "exact" : "NOT exact") +
              ", max relative telescoping defect " + sci(worst_tel) + " over " + std::to_string(checks) +
              " steps"};
}

Outcome u_recurrence() {
  bool all_ok = true;
  std::ostringstream per_n;
  for (Index n : {5, 10, 50}) {
    const aapda::Problem prob = example1(n, n);
    const aapda::SaddlePoint sp = aapda::solve_kkt_saddle(prob);
    aapda::AapdaOptions opts = example1_options(n, aapda::PSchedule::constant(4.0));
    opts.subsolver.force_method = aapda::SubMethod::kDirect;
    const aapda::Trace t = aapda::run(prob, opts, &sp);
    const IterateView v = view_of(t, opts.gamma_1);
    auto grad_l = [&](std::size_t j) { return aapda::eval_lagrangian(prob, v.x[j], v.lambda[j]).grad_x; };
    auto y_of = [&](std::size_t j) -> Vector {
      if (j == 0) return v.x[0];
      return v.x[j] + (v.tau[j] / v.gamma[j]) * (v.x[j] - v.x[j - 1]);
    };
    auto u_of = [&](std::size_t j) -> Vector { return y_of(j) - sp.x_star + v.gamma[j] * grad_l(j); };
    double worst_n = 0.0;
    std::size_t worst_k = 0;
    for (std::size_t j = 0; j + 1 < v.x.size(); ++j) {
      const Vector uk = u_of(j);
      const Vector uk1 = u_of(j + 1);
      const double defect = (uk1 - uk + v.gamma[j + 1] * grad_l(j + 1)).norm();
      const double ratio = defect / (1e-8 * (1.0 + uk.norm()));
      if (ratio > worst_n) {
        worst_n = ratio;
        worst_k = j + 1;
      }
    }
    all_ok &= worst_n <= 1.0;
    per_n << " n=" << n << ": " << sci(worst_n * 1e-8) << " at k=" << worst_k << " (gamma_{k+1}="
          << sci(v.gamma[worst_k]) << ")";
  }
  return {all_ok, "max ||u_{k+1} - u_k + gamma_{k+1} grad L|| / (1 + ||u_k||):" + per_n.str() +
                      "; bound 1e-08"};
}

Outcome energy_monotone() {
  const aapda::Problem prob = example1(10, 10);
  const aapda::SaddlePoint sp = aapda::solve_kkt_saddle(prob);
  aapda::AapdaOptions opts = example1_options(10, aapda::PSchedule::constant(4.0));
  opts.mu_floor = 1.0;
  const aapda::Trace t = aapda::run(prob, opts, &sp);
  std::vector<double> energy;
  std::size_t hyp_rows = 0;
  for (const aapda::TraceRecord& r : t.records) {
    // Monotonicity is only claimed while mu_k >= 1 is nondecreasing; stop
    // at the first step where that fails.
    if (!r.hypothesis_ok) break;
    energy.push_back(*r.energy);
    ++hyp_rows;
  }
  if (energy.size() < 2) return {false, "fewer than two iterations satisfy the step hypothesis"};
  const double slack = 1e-9 * (1.0 + energy.front());
  const auto bad = aapda::energy_monotonicity(energy, slack);
  double worst = 0.0;
  for (std::size_t i = 1; i < energy.size(); ++i) worst = std::max(worst, energy[i] - energy[i - 1]);
  return {bad.empty(), std::to_string(bad.size()) + " increases beyond slack over " + std::to_string(hyp_rows) +
                           " of " + std::to_string(t.records.size()) +
                           " iterations under the hypothesis; max increment " + sci(worst) + ", E_1 " +
                           sci(energy.front())};
}

Outcome discrete_rate() {
  const aapda::Problem prob = example1(10, 10);
  const aapda::SaddlePoint sp = aapda::solve_kkt_saddle(prob);
  const aapda::Trace t = aapda::run(prob, example1_options(10, aapda::PSchedule::constant(4.0)), &sp);
  std::vector<double> gap, feas;
  for (const aapda::TraceRecord& r : t.records) {
    gap.push_back(*r.f_gap);
    feas.push_back(r.feas);
  }
  const double target = -(3.0 * 4.0 - 1.0) / (2.0 * 4.0);
  std::string detail;
  bool ok = true;
  for (const auto& [name, series] : {std::pair{"f_gap", &gap}, std::pair{"feas", &feas}}) {
    bool solved = false;
    for (std::size_t i = 0; i < series->size() && i < 99; ++i) solved |= (*series)[i] <= 1e-12;
    const aapda::RateReport r = aapda::fit_rate(*series, 0.3, name);
    const bool pass = solved || r.slope <= target;
    ok &= pass;
    detail += std::string(name) + " slope " + sci(r.slope) + (solved ? " (reached 1e-12)" : "") + "; ";
  }
  return {ok, detail + "bound " + sci(target) + ", " + std::to_string(t.iterations()) + " iterations"};
}

aapda::OdeParams ode_params(double q, double p) {
  aapda::OdeParams params;
  params.q = q;
  params.p = p;
  params.t0 = 1.0;
  // The closed-loop case is stiff once tau mu ||A||^2 is large.
  params.method = (q > 1.0 && p > 1.0) ? aapda::OdeMethod::kRosenbrock : aapda::OdeMethod::kDormandPrince;
  params.t_end = (q > 1.0 && p > 1.0) ? 100.0 : 51.0;
  return params;
}

Outcome continuous_dissipation() {
  const aapda::Problem prob = example1(2, 2);
  const aapda::SaddlePoint sp = aapda::solve_kkt_saddle(prob);
  bool ok = true;
  std::string detail;
  for (const auto& [q, p] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    const aapda::OdeParams params = ode_params(q, p);
    const aapda::TrajectoryRecord rec =
        aapda::integrate(prob, aapda::initial_state(prob, params, Vector::Ones(2)), params, &sp);
    std::vector<double> energy;
    for (const aapda::TrajectoryRow& r : rec.rows) energy.push_back(*r.energy);
    const auto bad = aapda::energy_monotonicity(energy, 1e-8 * (1.0 + energy.front()));
    ok &= bad.empty();
    detail += "q=" + sci(q) + ",p=" + sci(p) + ": " + std::to_string(bad.size()) + " increases over " +
              std::to_string(energy.size()) + " steps (" + std::string(aapda::to_string(params.method)) +
              ", stop " + std::string(aapda::to_string(rec.stop)) + "); ";
  }
  return {ok, detail};
}

Outcome continuous_rate() {
  const aapda::Problem prob = example1(2, 2);
  const aapda::SaddlePoint sp = aapda::solve_kkt_saddle(prob);
  const aapda::OdeParams params = ode_params(2.0, 3.0);
  const aapda::TrajectoryRecord rec =
      aapda::integrate(prob, aapda::initial_state(prob, params, Vector::Ones(2)), params, &sp);
  std::vector<double> t, gap;
  std::optional<double> solved_at;
  for (const aapda::TrajectoryRow& r : rec.rows) {
    t.push_back(r.t);
    gap.push_back(*r.f_gap);
    if (!solved_at && *r.f_gap <= 1e-12) solved_at = r.t;
  }
  const double target = -(2.0 * 2.0 * 3.0 - 3.0 + 1.0) / 2.0;
  const double t_last = t.back();
  // Slope over the final decade of the integration actually performed, with
  // samples that already hit 1e-12 excluded from the fit.
  std::vector<double> ft, fg;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (gap[i] > 1e-12) {
      ft.push_back(t[i]);
      fg.push_back(gap[i]);
    }
  }
  const double fit_end = solved_at ? *solved_at : t_last;
  const aapda::RateReport r = aapda::fit_rate_xy(ft, fg, fit_end / 10.0, fit_end, "f_gap");
  const bool pass = solved_at.has_value() || r.slope <= target;
  return {pass, "slope " + sci(r.slope) + " over t in [" + sci(fit_end / 10.0) + ", " + sci(fit_end) +
                    "], bound " + sci(target) +
                    (solved_at ? ", residual reached 1e-12 at t=" + sci(*solved_at) : std::string()) +
                    ", final |f - f*| " + sci(gap.back()) + ", stop " + std::string(aapda::to_string(rec.stop))};
}

Outcome special_case_collapse() {
  const aapda::Problem prob = example1(2, 2);
  aapda::OdeParams params = ode_params(1.0, 1.0);
  params.record_states = true;
  const aapda::TrajectoryRecord rec =
      aapda::integrate(prob, aapda::initial_state(prob, params, Vector::Ones(2)), params);
  std::vector<double> times;
  for (const aapda::TrajectoryRow& r : rec.rows) times.push_back(r.t);
  const Matrix q = prob.quadratic_form()->materialize();
  const auto ref = oracle::open_loop_flow(q, prob.quadratic_form()->linear, *prob.constraint_dense(), prob.rhs(),
                                          Vector::Ones(2), Vector::Zero(2), params.t0, times, 1e-13, 1e-15);
  if (ref.size() != rec.rows.size()) return {false, "oracle returned a different number of samples"};
  double worst = 0.0, worst_t = 0.0;
  bool unit_mu = true;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const aapda::TrajectoryRow& r = rec.rows[i];
    unit_mu &= (r.mu == 1.0);
    const double scale = 1.0 + std::max(ref[i].x.lpNorm<Eigen::Infinity>(), ref[i].lambda.lpNorm<Eigen::Infinity>());
    const double err = std::max((r.x - ref[i].x).lpNorm<Eigen::Infinity>(),
                                (r.lambda - ref[i].lambda).lpNorm<Eigen::Infinity>()) /
                       scale;
    if (err > worst) {
      worst = err;
      worst_t = r.t;
    }
  }
  const double bound = 10.0 * params.rel_tol;
  const bool span_ok = rec.rows.back().t >= params.t0 + 50.0;
  return {unit_mu && span_ok && worst <= bound,
          "sup relative deviation from the second-order open-loop flow " + sci(worst) + " at t=" + sci(worst_t) +
              ", bound 10 x rel_tol = " + sci(bound) + ", span [" + sci(params.t0) + ", " +
              sci(rec.rows.back().t) + "]" + (unit_mu ? "" : ", mu != 1 observed")};
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(20260);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> dim(2, 20);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = dim(gen);
    const int m = std::uniform_int_distribution<int>(1, n)(gen);
    Matrix a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(gen);
    Vector b(m);
    for (int i = 0; i < m; ++i) b(i) = normal(gen);
    Matrix q;
    Vector c;
    aapda::QuadraticForm form;
    if (trial % 2 == 0) {
      const double mu = 0.5 + std::uniform_real_distribution<double>(0.0, 2.0)(gen);
      form = aapda::QuadraticForm::scaled_identity(mu, n);
      q = mu * Matrix::Identity(n, n);
      c = Vector::Zero(n);
    } else {
      Matrix g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(gen);
      q = g.transpose() * g / n + 0.1 * Matrix::Identity(n, n);
      c = Vector(n);
      for (int i = 0; i < n; ++i) c(i) = normal(gen);
      form = aapda::QuadraticForm::dense(q, c, 0.0);
    }
    const aapda::Problem prob =
        aapda::Problem::quadratic(form, aapda::ConstraintOperator::from_dense(a), b);
    const aapda::SaddlePoint sp = aapda::solve_kkt_saddle(prob);
    const Vector ref = oracle::penalty_path_minimizer(q, c, a, b);
    worst = std::max(worst, (sp.x_star - ref).norm() / std::max(ref.norm(), 1e-300));
  }
  return {worst <= 1e-5, "max ||x* - x_penalty|| / ||x_penalty|| = " + sci(worst) + " over 20 instances"};
}

Outcome subsolver_equivalence() {
  std::mt19937_64 gen(4242);
  std::uniform_int_distribution<int> dim(1, 50);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = dim(gen);
    const int m = std::uniform_int_distribution<int>(1, n)(gen);
    const aapda::Problem prob = aapda::gen_equality_qp(n, m, 1.5, aapda::RngSpec{static_cast<std::uint64_t>(trial)});
    Vector xbar(n), sigma(m);
    for (int i = 0; i < n; ++i) xbar(i) = normal(gen);
    for (int i = 0; i < m; ++i) sigma(i) = normal(gen);
    const double gamma = std::exp(std::uniform_real_distribution<double>(-2.0, 3.0)(gen));
    const double tau = std::exp(std::uniform_real_distribution<double>(-2.0, 4.0)(gen));
    const aapda::SubproblemSpec spec = aapda::SubproblemSpec::make(prob, xbar, sigma, gamma, tau);
    aapda::SubsolverOptions direct, cg;
    direct.force_method = aapda::SubMethod::kDirect;
    cg.force_method = aapda::SubMethod::kConjugateGradient;
    const Vector xd = aapda::solve_subproblem(spec, 1e-13, direct).x_next;
    const Vector xc = aapda::solve_subproblem(spec, 1e-13, cg).x_next;
    worst = std::max(worst, (xd - xc).norm() / (1.0 + xd.norm()));
  }
  return {worst <= 1e-8, "max ||x_direct - x_cg|| / (1 + ||x||) = " + sci(worst) + " over 50 specs"};
}

Outcome fista_envelope() {
  std::mt19937_64 gen(777);
  std::normal_distribution<double> normal;
  double worst_excess = -1e300;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + 3 * trial;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = normal(gen);
    const Matrix q = g.transpose() * g / n + 1e-3 * Matrix::Identity(n, n);
    Vector c(n), x1(n);
    for (int i = 0; i < n; ++i) {
      c(i) = normal(gen);
      x1(i) = normal(gen);
    }
    const aapda::Problem prob = aapda::Problem::quadratic(aapda::QuadraticForm::dense(q, c, 0.0),
                                                          aapda::ConstraintOperator::none(), Vector(0));
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(q);
    const double alpha = 1.0 / eig.eigenvalues().maxCoeff();
    const Vector x_star = q.ldlt().solve(-c);
    aapda::BaselineOptions o;
    o.method = aapda::BaselineMethod::kFista;
    o.step = alpha;
    o.max_iterations = 500;
    o.stop_theta = 0.0;
    o.grad_stop_eps = 0.0;
    o.x_init = x1;
    const aapda::Trace t = aapda::run_fista(prob, o);
    const double r0 = (x1 - x_star).squaredNorm();
    for (const aapda::TraceRecord& r : t.records) {
      const Vector d = r.x - x_star;
      const double gap = 0.5 * d.dot(q * d);
      const double k = r.k;
      const double envelope = 2.0 * r0 / (alpha * (k + 1.0) * (k + 1.0)) + 1e-9;
      worst_excess = std::max(worst_excess, gap - envelope);
    }
  }
  return {worst_excess <= 0.0, "max (f_k - f*) - envelope = " + sci(worst_excess) + " over 10 quadratics, k <= 500"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const fs::path& work, const std::vector<std::string>& configs) {
  std::size_t compared = 0;
  std::vector<std::string> mismatches;
  for (const std::string& name : configs) {
    const bench::ExperimentConfig cfg = bench::load_config(std::string(AAPDA_CONFIG_DIR) + "/" + name + ".cfg");
    std::vector<fs::path> dirs;
    for (const char* run : {"first", "second"}) {
      bench::RunOptions opts;
      opts.out_dir = (work / name / run).string();
      opts.plot = false;
      fs::remove_all(*opts.out_dir);
      const bench::ExperimentResult res = bench::run_experiment(cfg, opts);
      if (res.any_solver_failed()) {
        for (const auto& s : res.solvers) {
          if (!s.ok) mismatches.push_back(name + "/" + s.name + " failed: " + s.error);
        }
      }
      dirs.emplace_back(*opts.out_dir);
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() != ".csv") continue;
      const fs::path other = dirs[1] / e.path().filename();
      if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
        mismatches.push_back(name + "/" + e.path().filename().string());
      }
      ++compared;
    }
  }
  std::string detail = std::to_string(compared) + " CSV pairs compared across " + std::to_string(configs.size()) +
                       " configs";
  for (const std::string& m : mismatches) detail += "; differs: " + m;
  return {compared > 0 && mismatches.empty(), detail};
}

std::set<int> parse_id_list(const std::string& text) {
  std::set<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) ids.insert(std::stoi(item));
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string expect_fail_text;
  std::string only_text;
  std::string work_dir = (fs::temp_directory_path() / "aapda_acceptance").string();
  bool large = false;
  app.add_option("--expect-fail", expect_fail_text, "Comma-separated criteria known to fail");
  app.add_option("--only", only_text, "Comma-separated criteria to run");
  app.add_option("--work-dir", work_dir, "Scratch directory for end-to-end runs");
  app.add_flag("--large", large, "Criterion 12 on the n = m = 2000 config instead of the default set");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> expected = parse_id_list(expect_fail_text);
  const std::set<int> only = parse_id_list(only_text);
  const fs::path work(work_dir);

  std::vector<std::string> det_configs = {"example1_n10", "example1_n300", "example2_s0.5_theta1e-6",
                                          "example2_s1_theta1e-6"};
  double det_budget = 30.0;
  if (large) {
    det_configs = {"example1_n2000"};
    det_budget = 600.0;
  }

  const std::vector<Criterion> criteria = {
      {1, "closed-loop identity", 1.0, closed_loop_identity},
      {2, "scaling recurrences and dual telescoping", 1.0, recurrences},
      {3, "u-recurrence with direct subproblem solves", 5.0, u_recurrence},
      {4, "discrete energy monotone with mu_floor = 1", 1.0, energy_monotone},
      {5, "discrete rate, p = 4", 2.0, discrete_rate},
      {6, "continuous dissipation", 5.0, continuous_dissipation},
      {7, "continuous rate, q = 2, p = 3", 10.0, continuous_rate},
      {8, "open-loop special case", 5.0, special_case_collapse},
      {9, "KKT solve vs penalty-path oracle", 5.0, oracle_equivalence},
      {10, "direct vs conjugate-gradient subproblem", 2.0, subsolver_equivalence},
      {11, "FISTA envelope", 2.0, fista_envelope},
      {12, large ? "end-to-end determinism, n = m = 2000" : "end-to-end determinism", det_budget,
       [&] { return determinism(work, det_configs); }},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = out.pass && in_time;
    const bool expect = expected.count(c.id) > 0;
    std::string verdict = pass ? "PASS" : "FAIL";
    if (expect) verdict += pass ? " (unexpected pass)" : " (expected)";
    if (pass == expect) ++unexpected;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.budget_seconds);
    std::cout << "criterion " << c.id << ": " << verdict << " | " << c.title << " | " << out.detail << " | "
              << timing << (in_time ? "" : " (over budget)") << std::endl;
  }
  return unexpected == 0 ? 0 : 1;
}
