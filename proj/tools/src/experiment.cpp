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

#include "bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "aapda/baselines.hpp"
#include "aapda/format.hpp"
#include "aapda/ode.hpp"
#include "aapda/problem_io.hpp"
#include "aapda/solver.hpp"
#include "aapda/subsolver.hpp"
#include "aapda/trace_csv.hpp"
#include "bench/svg.hpp"

namespace bench {

using aapda::ErrorCode;
using aapda::format_double;

bool ExperimentResult::any_solver_failed() const {
  return std::any_of(solvers.begin(), solvers.end(), [](const SolverOutcome& s) { return !s.ok; });
}

bool ExperimentResult::any_io_failed() const {
  return std::any_of(solvers.begin(), solvers.end(),
                     [](const SolverOutcome& s) { return s.error_code == ErrorCode::kIo; });
}

aapda::Problem build_problem(const ExperimentConfig& cfg) {
  const aapda::RngSpec rng{cfg.seed};
  switch (cfg.tag) {
    case ExperimentTag::kExample1:
    case ExperimentTag::kOde:
      return aapda::gen_equality_qp(cfg.n, cfg.m, cfg.mu, rng);
    case ExperimentTag::kExample2:
      return aapda::gen_least_squares(cfg.m, cfg.n, cfg.density, rng);
    case ExperimentTag::kCustom:
      return aapda::load_problem(cfg.problem_path);
  }
  throw aapda::Error(ErrorCode::kInvalidParameter, "unknown experiment tag");
}

aapda::Vector initial_point(const ExperimentConfig& cfg, aapda::Index n) {
  return cfg.x_init == InitPoint::kOnes ? aapda::Vector::Ones(n) : aapda::Vector::Zero(n);
}

namespace {

using Clock = std::chrono::steady_clock;

// Residual below which a series counts as solved to machine precision.
constexpr double kSolvedLevel = 1e-12;

struct Context {
  const ExperimentConfig& cfg;
  const aapda::Problem& problem;
  const aapda::SaddlePoint* saddle;
  std::shared_ptr<const aapda::SpectralFactor> spectral;
  std::filesystem::path dir;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw aapda::Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
}

void add_rate(SolverOutcome& o, const std::vector<double>& series, const char* tag, bool discrete,
              const std::vector<double>& axis) {
  if (series.empty()) return;
  const auto solved = std::find_if(series.begin(), series.end(), [](double v) { return v <= kSolvedLevel; });
  if (solved != series.end()) {
    o.notes.push_back(std::string(tag) + " reached " + format_double(kSolvedLevel) + " at " +
                      (discrete ? "k = " : "t = ") + format_double(axis[solved - series.begin()]));
  }
  try {
    if (discrete) {
      o.rates.push_back(aapda::fit_rate(series, 0.3, tag));
    } else {
      const double t_last = axis.back();
      o.rates.push_back(aapda::fit_rate_xy(axis, series, t_last / 10.0, t_last, tag));
    }
  } catch (const aapda::Error& e) {
    o.notes.push_back(std::string("rate ") + tag + ": " + e.what());
  }
}

void fill_from_trace(SolverOutcome& o, const aapda::Trace& trace) {
  o.rows = trace.records.size();
  o.stop = std::string(aapda::to_string(trace.stop));
  for (const aapda::TraceRecord& r : trace.records) {
    o.axis.push_back(r.k);
    if (r.f_gap) o.f_gap.push_back(*r.f_gap);
    o.feas.push_back(r.feas);
  }
  if (!trace.records.empty()) {
    const aapda::TraceRecord& last = trace.records.back();
    o.final_f_gap = last.f_gap;
    o.final_feas = last.feas;
    o.final_pd_gap = last.pd_gap;
    const auto floor_hits = std::count_if(trace.records.begin(), trace.records.end(),
                                          [](const aapda::TraceRecord& r) { return r.sub_floor_limited; });
    if (floor_hits > 0) {
      o.notes.push_back("subproblem tolerance below rounding floor at " + std::to_string(floor_hits) +
                        " iterations");
    }
    const auto outside = std::count_if(trace.records.begin(), trace.records.end(),
                                       [](const aapda::TraceRecord& r) { return !r.hypothesis_ok; });
    if (outside > 0 && o.kind == SolverKind::kAapda) {
      o.notes.push_back("mu_k < 1 or decreasing at " + std::to_string(outside) + " iterations");
    }
  }
  add_rate(o, o.f_gap, "f_gap", true, o.axis);
  if (o.feas.size() == o.axis.size() &&
      std::any_of(o.feas.begin(), o.feas.end(), [](double v) { return v != 0.0; })) {
    add_rate(o, o.feas, "feas", true, o.axis);
  }
}

void fill_from_trajectory(SolverOutcome& o, const aapda::TrajectoryRecord& traj) {
  o.rows = traj.rows.size();
  o.stop = std::string(aapda::to_string(traj.stop));
  std::vector<double> energy;
  for (const aapda::TrajectoryRow& r : traj.rows) {
    o.axis.push_back(r.t);
    if (r.f_gap) o.f_gap.push_back(*r.f_gap);
    if (r.energy) energy.push_back(*r.energy);
    o.feas.push_back(r.feas);
  }
  if (!traj.rows.empty()) {
    o.final_f_gap = traj.rows.back().f_gap;
    o.final_feas = traj.rows.back().feas;
    o.final_pd_gap = traj.rows.back().pd_gap;
  }
  if (!energy.empty()) {
    const auto ups = aapda::energy_monotonicity(energy, 1e-8);
    o.notes.push_back("energy increases beyond 1e-8 (1 + E(t0)): " + std::to_string(ups.size()));
  }
  if (traj.rejected_steps > 0) o.notes.push_back("rejected steps: " + std::to_string(traj.rejected_steps));
  add_rate(o, o.f_gap, "f_gap", false, o.axis);
  add_rate(o, o.feas, "feas", false, o.axis);
}

std::vector<std::pair<std::string, std::string>> trajectory_header(const Context& ctx, const SolverConfig& sc) {
  std::vector<std::pair<std::string, std::string>> h;
  h.emplace_back("solver", "ode");
  const aapda::ProblemDescriptor& d = ctx.problem.descriptor();
  h.emplace_back("generator", d.generator);
  for (const auto& [k, v] : d.params) h.emplace_back("param." + k, v);
  if (d.seed) h.emplace_back("seed", std::to_string(*d.seed));
  const aapda::OdeParams& p = sc.ode;
  h.emplace_back("option.integrator", std::string(aapda::to_string(p.method)));
  h.emplace_back("option.q", format_double(p.q));
  h.emplace_back("option.p", format_double(p.p));
  h.emplace_back("option.t0", format_double(p.t0));
  h.emplace_back("option.t_end", format_double(p.t_end));
  h.emplace_back("option.rel_tol", format_double(p.rel_tol));
  h.emplace_back("option.abs_tol", format_double(p.abs_tol));
  h.emplace_back("option.mu_cap", format_double(p.mu_cap));
  return h;
}

SolverOutcome run_one(const Context& ctx, const SolverConfig& sc) {
  SolverOutcome o;
  o.name = sc.name;
  o.kind = sc.kind;
  const aapda::Index n = ctx.problem.dim_primal();
  const auto start = Clock::now();
  std::ostringstream csv;
  try {
    switch (sc.kind) {
      case SolverKind::kAapda: {
        aapda::AapdaOptions opts = sc.aapda;
        opts.x_init = initial_point(ctx.cfg, n);
        if (!opts.subsolver.force_method && !opts.subsolver.spectral) opts.subsolver.spectral = ctx.spectral;
        const aapda::Trace trace = aapda::run(ctx.problem, opts, ctx.saddle);
        aapda::write_trace_csv(csv, trace);
        fill_from_trace(o, trace);
        break;
      }
      case SolverKind::kLinAlm:
      case SolverKind::kFista: {
        aapda::BaselineOptions opts = sc.baseline;
        opts.x_init = initial_point(ctx.cfg, n);
        const aapda::Trace trace = aapda::run_baseline(ctx.problem, opts, ctx.saddle);
        aapda::write_trace_csv(csv, trace);
        fill_from_trace(o, trace);
        break;
      }
      case SolverKind::kOde: {
        const aapda::OdeState init = aapda::initial_state(ctx.problem, sc.ode, initial_point(ctx.cfg, n));
        const aapda::TrajectoryRecord traj = aapda::integrate(ctx.problem, init, sc.ode, ctx.saddle);
        aapda::write_trajectory_csv(csv, traj, trajectory_header(ctx, sc));
        fill_from_trajectory(o, traj);
        break;
      }
    }
    o.ok = true;
  } catch (const aapda::RunFailure& e) {
    o.error_code = e.code();
    o.error = e.what();
    o.notes.push_back("partial trace: " + std::to_string(e.partial_trace().records.size()) + " rows (not written)");
  } catch (const aapda::StiffnessError& e) {
    o.error_code = e.code();
    o.error = e.what();
    o.notes.push_back("partial trajectory: " + std::to_string(e.partial().rows.size()) + " rows (not written)");
  } catch (const aapda::Error& e) {
    o.error_code = e.code();
    o.error = e.what();
  } catch (const std::exception& e) {
    o.error_code = ErrorCode::kInvalidState;
    o.error = e.what();
  }
  o.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (o.ok) {
    try {
      write_file(ctx.dir / (sc.name + ".csv"), csv.str());
    } catch (const aapda::Error& e) {
      o.ok = false;
      o.error_code = e.code();
      o.error = e.what();
    }
  }
  return o;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : "n/a"; }

std::string summary_text(const ExperimentConfig& cfg, const ExperimentResult& res) {
  std::ostringstream out;
  out << "experiment: " << to_string(cfg.tag) << '\n';
  out << "problem: " << res.problem_line << '\n';
  out << "saddle: " << res.saddle_line << '\n';
  out << "x_init: " << (cfg.x_init == InitPoint::kOnes ? "ones" : "zeros") << '\n';
  for (const SolverOutcome& o : res.solvers) {
    out << "\n[" << o.name << "]\n";
    out << "method: " << to_string(o.kind) << '\n';
    if (!o.ok) {
      out << "status: error (" << (o.error_code ? aapda::to_string(*o.error_code) : "unknown") << ")\n";
      out << "error: " << o.error << '\n';
    } else {
      out << "status: ok\n";
      out << "stop: " << o.stop << '\n';
      out << (o.kind == SolverKind::kOde ? "rows: " : "iterations: ") << o.rows << '\n';
      out << "final f_gap: " << opt_text(o.final_f_gap) << '\n';
      out << "final feas: " << opt_text(o.final_feas) << '\n';
      out << "final pd_gap: " << opt_text(o.final_pd_gap) << '\n';
      for (const aapda::RateReport& r : o.rates) {
        out << "rate " << r.series << ": slope " << format_double(r.slope) << ", r^2 "
            << format_double(r.r_squared) << ", window " << o.axis[r.first] << ".." << o.axis[r.last]
            << (r.looks_exponential ? ", exponential fit is better" : "") << '\n';
      }
    }
    for (const std::string& note : o.notes) out << "note: " << note << '\n';
    out << "wall_seconds: " << format_double(o.wall_seconds) << '\n';
  }
  return out.str();
}

std::string timing_text(const ExperimentResult& res) {
  std::ostringstream out;
  out << "solver,wall_ns\n";
  for (const SolverOutcome& o : res.solvers) {
    out << o.name << ',' << static_cast<long long>(o.wall_seconds * 1e9) << '\n';
  }
  return out.str();
}

std::string plot_svg(const ExperimentConfig& cfg, const ExperimentResult& res) {
  const std::string x_label = cfg.tag == ExperimentTag::kOde ? "t" : "k";
  PlotPanel gap{"|f(x) - f*|", x_label, {}};
  PlotPanel feas{"||Ax - b||", x_label, {}};
  const bool constrained = std::any_of(res.solvers.begin(), res.solvers.end(), [](const SolverOutcome& o) {
    return std::any_of(o.feas.begin(), o.feas.end(), [](double v) { return v != 0.0; });
  });
  for (const SolverOutcome& o : res.solvers) {
    if (!o.ok) continue;
    if (o.f_gap.size() == o.axis.size()) gap.series.push_back({o.name, o.axis, o.f_gap});
    feas.series.push_back({o.name, o.axis, o.feas});
  }
  std::vector<PlotPanel> panels{gap};
  if (constrained) panels.push_back(feas);
  return render_svg(panels);
}

std::string describe_problem(const aapda::Problem& problem) {
  const aapda::ProblemDescriptor& d = problem.descriptor();
  std::string line = d.generator;
  for (const auto& [k, v] : d.params) line += " " + k + "=" + v;
  if (d.seed) line += " seed=" + std::to_string(*d.seed);
  return line;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentResult res;
  res.out_dir = opts.out_dir.value_or(cfg.out_dir);
  const bool plot = opts.plot.value_or(cfg.plot);

  std::error_code ec;
  std::filesystem::create_directories(res.out_dir, ec);
  if (ec || !std::filesystem::is_directory(res.out_dir)) {
    throw aapda::Error(ErrorCode::kIo, "cannot create output directory '" + res.out_dir + "'");
  }

  // One instance shared by all solvers.
  const aapda::Problem problem = build_problem(cfg);
  res.problem_line = describe_problem(problem);
  std::optional<aapda::SaddlePoint> saddle;
  try {
    saddle = aapda::solve_kkt_saddle(problem);
    res.saddle_line = "kkt residual " + format_double(saddle->kkt_residual);
  } catch (const aapda::Error& e) {
    res.saddle_line = std::string("unavailable (") + e.what() + ")";
  }

  Context ctx{cfg, problem, saddle ? &*saddle : nullptr, nullptr, res.out_dir};
  const bool wants_spectral = std::any_of(cfg.solvers.begin(), cfg.solvers.end(), [](const SolverConfig& s) {
    return s.kind == SolverKind::kAapda && !s.aapda.subsolver.force_method;
  });
  const aapda::Index n = problem.dim_primal();
  if (wants_spectral && n >= aapda::kSpectralMinDim && n <= aapda::SubsolverOptions{}.direct_threshold) {
    if (auto f = aapda::SpectralFactor::build(problem)) {
      ctx.spectral = std::make_shared<const aapda::SpectralFactor>(std::move(*f));
    }
  }

  res.solvers.resize(cfg.solvers.size());
  const int jobs = std::clamp(opts.jobs, 1, static_cast<int>(std::max<std::size_t>(cfg.solvers.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.solvers.size(); i = next++) res.solvers[i] = run_one(ctx, cfg.solvers[i]);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const std::filesystem::path dir(res.out_dir);
  write_file(dir / "summary.txt", summary_text(cfg, res));
  write_file(dir / "timing.txt", timing_text(res));
  if (plot) write_file(dir / "convergence.svg", plot_svg(cfg, res));
  return res;
}

}  // namespace bench
