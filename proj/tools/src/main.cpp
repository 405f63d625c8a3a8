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

// bench: runs experiment configs and fits rates to trace CSVs.
//
// Exit status: 0 success, 1 config or input error, 2 solver error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aapda/format.hpp"
#include "aapda/metrics.hpp"
#include "aapda/trace_csv.hpp"
#include "bench/config.hpp"
#include "bench/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

int exit_code_for(const aapda::Error& e) {
  switch (e.code()) {
    case aapda::ErrorCode::kIo: return kExitIo;
    case aapda::ErrorCode::kParse:
    case aapda::ErrorCode::kInvalidParameter:
    case aapda::ErrorCode::kInvalidDimension:
    case aapda::ErrorCode::kInsufficientData: return kExitConfig;
    default: return kExitSolver;
  }
}

void print_config_error(const std::string& path, const bench::ConfigError& e) {
  for (const bench::ConfigIssue& issue : e.issues()) {
    std::cerr << path << ':';
    if (issue.line > 0) std::cerr << issue.line << ':';
    std::cerr << " error: " << issue.message << '\n';
  }
}

int cmd_validate(const std::string& path) {
  try {
    const bench::ExperimentConfig cfg = bench::load_config(path);
    std::cout << path << ": ok (" << bench::to_string(cfg.tag) << ", " << cfg.solvers.size() << " solver"
              << (cfg.solvers.size() == 1 ? "" : "s") << ")\n";
    return kExitOk;
  } catch (const bench::ConfigError& e) {
    print_config_error(path, e);
    return kExitConfig;
  } catch (const aapda::Error& e) {
    std::cerr << path << ": error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

int cmd_run(const std::string& path, const std::optional<std::string>& out, bool no_plot, int jobs) {
  bench::ExperimentConfig cfg;
  try {
    cfg = bench::load_config(path);
  } catch (const bench::ConfigError& e) {
    print_config_error(path, e);
    return kExitConfig;
  } catch (const aapda::Error& e) {
    std::cerr << path << ": error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  bench::RunOptions opts;
  opts.out_dir = out;
  if (no_plot) opts.plot = false;
  opts.jobs = jobs;

  bench::ExperimentResult res;
  try {
    res = bench::run_experiment(cfg, opts);
  } catch (const aapda::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  for (const bench::SolverOutcome& o : res.solvers) {
    std::cout << o.name << ": ";
    if (o.ok) {
      std::cout << o.stop << " after " << o.rows << (o.kind == bench::SolverKind::kOde ? " rows" : " iterations");
      if (o.final_f_gap) std::cout << ", f_gap " << aapda::format_double(*o.final_f_gap);
      std::cout << '\n';
    } else {
      std::cout << "failed: " << o.error << '\n';
    }
  }
  std::cout << "wrote " << res.out_dir << '\n';
  if (res.any_io_failed()) return kExitIo;
  return res.any_solver_failed() ? kExitSolver : kExitOk;
}

int cmd_rate(const std::string& path, const std::string& column, double burn_in) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": error: cannot read file\n";
    return kExitIo;
  }
  try {
    const aapda::CsvTable table = aapda::read_csv(in);
    aapda::validate_trace_schema(table);
    const auto values = table.column(column);
    const auto axis = table.column(table.columns.front());
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i]) {
        std::cerr << path << ": error: column '" << column << "' is empty at row " << i + 1 << '\n';
        return kExitConfig;
      }
      xs.push_back(*axis[i]);
      ys.push_back(*values[i]);
    }
    aapda::RateReport r;
    if (table.columns.front() == "k") {
      r = aapda::fit_rate(ys, burn_in, column);
    } else {
      // Time axis: the burn-in is a fraction of the integration span.
      if (!(burn_in >= 0.0 && burn_in < 1.0)) {
        throw aapda::Error(aapda::ErrorCode::kInvalidParameter, "burn-in must lie in [0, 1)");
      }
      const double t0 = xs.front();
      r = aapda::fit_rate_xy(xs, ys, t0 + burn_in * (xs.back() - t0), xs.back(), column);
    }
    std::cout << "column: " << column << '\n'
              << "slope: " << aapda::format_double(r.slope) << '\n'
              << "intercept: " << aapda::format_double(r.intercept) << '\n'
              << "r_squared: " << aapda::format_double(r.r_squared) << '\n'
              << "window: " << aapda::format_double(xs[r.first]) << ".." << aapda::format_double(xs[r.last])
              << " (" << r.last - r.first + 1 << " points)\n"
              << "exp_r_squared: " << aapda::format_double(r.exp_r_squared) << '\n'
              << "looks_exponential: " << (r.looks_exponential ? "yes" : "no") << '\n';
    return kExitOk;
  } catch (const aapda::Error& e) {
    std::cerr << path << ": error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence experiments for the accelerated primal-dual solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  bool no_plot = false;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "Run an experiment config and write traces");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
  run->add_flag("--no-plot", no_plot, "Skip convergence.svg");
  run->add_option("--jobs", jobs, "Solver runs in parallel")->check(CLI::Range(1, 256));

  CLI::App* validate = app.add_subcommand("validate", "Check a config file and report every error");
  validate->add_option("config", config_path, "Experiment config file")->required();

  std::string trace_path;
  std::string column = "f_gap";
  double burn_in = 0.3;
  CLI::App* rate = app.add_subcommand("rate", "Fit a log-log rate to one trace column");
  rate->add_option("trace", trace_path, "Trace CSV")->required();
  rate->add_option("--column", column, "Column to fit")->capture_default_str();
  rate->add_option("--burn-in", burn_in, "Leading fraction to discard")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path, out_dir, no_plot, jobs);
  if (*validate) return cmd_validate(config_path);
  return cmd_rate(trace_path, column, burn_in);
}
