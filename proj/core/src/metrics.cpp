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

#include "aapda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aapda/lagrangian.hpp"

namespace aapda {

ResidualSeries residual_series(const Trace& trace, const Problem& problem, const SaddlePoint& saddle) {
  ResidualSeries out;
  const std::size_t n = trace.records.size();
  out.pd_gap.reserve(n);
  out.feasibility.reserve(n);
  out.objective_gap.reserve(n);
  for (const TraceRecord& rec : trace.records) {
    if (rec.x.size() != problem.dim_primal()) {
      throw Error(ErrorCode::kInvalidDimension, "residual_series: trace does not carry iterates");
    }
    out.pd_gap.push_back(pd_gap(problem, rec.x, saddle));
    out.feasibility.push_back(problem.dim_dual() > 0
                                  ? (problem.constraint_matvec(rec.x) - problem.rhs()).norm()
                                  : 0.0);
    out.objective_gap.push_back(std::abs(objective_gap(problem, rec.x, saddle.x_star)));
  }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares_line(const std::vector<double>& u, const std::vector<double>& v) {
  const double count = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= count;
  mv /= count;
  double suu = 0.0, suv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  LineFit fit;
  fit.slope = suv / suu;
  fit.intercept = mv - fit.slope * mu;
  // A constant series is fitted exactly by a flat line.
  fit.r_squared = svv == 0.0 ? 1.0 : std::min(1.0, std::max(0.0, suv * suv / (suu * svv)));
  return fit;
}

RateReport fit_window(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t first,
                      std::size_t last, std::string tag) {
  if (last < first || last - first + 1 < 5) {
    throw Error(ErrorCode::kInsufficientData, "fit_rate: fewer than 5 usable points in the window");
  }
  std::vector<double> lx, ly, x_lin;
  for (std::size_t i = first; i <= last; ++i) {
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
    x_lin.push_back(xs[i]);
  }
  const LineFit power = least_squares_line(lx, ly);
  const LineFit expo = least_squares_line(x_lin, ly);
  RateReport r;
  r.series = std::move(tag);
  r.slope = power.slope;
  r.intercept = power.intercept;
  r.r_squared = power.r_squared;
  r.first = first;
  r.last = last;
  r.exp_r_squared = expo.r_squared;
  r.looks_exponential = expo.r_squared > power.r_squared;
  return r;
}

// One past the last usable entry: values must stay above 1e-300.
std::size_t usable_end(const std::vector<double>& ys) {
  std::size_t end = 0;
  while (end < ys.size() && ys[end] > 1e-300 && std::isfinite(ys[end])) ++end;
  return end;
}

}  // namespace

RateReport fit_rate(const std::vector<double>& series, double burn_in, std::string tag) {
  if (!(burn_in >= 0.0 && burn_in < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "fit_rate: burn_in must lie in [0, 1)");
  }
  const std::size_t end = usable_end(series);
  const auto first = static_cast<std::size_t>(std::floor(burn_in * static_cast<double>(end)));
  if (end < 5 || end - first < 5) {
    throw Error(ErrorCode::kInsufficientData, "fit_rate: fewer than 5 usable points after burn-in");
  }
  std::vector<double> ks(series.size());
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<double>(i + 1);
  return fit_window(ks, series, first, end - 1, std::move(tag));
}

RateReport fit_rate_xy(const std::vector<double>& xs, const std::vector<double>& ys, double x_min,
                       double x_max, std::string tag) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kInvalidDimension, "fit_rate_xy: abscissa and series lengths differ");
  }
  const std::size_t end = usable_end(ys);
  std::size_t first = 0;
  while (first < end && xs[first] < x_min) ++first;
  std::size_t stop = first;
  while (stop < end && xs[stop] <= x_max) ++stop;
  if (stop - first < 5 || !(xs[first] > 0.0)) {
    throw Error(ErrorCode::kInsufficientData, "fit_rate_xy: fewer than 5 usable points in the window");
  }
  return fit_window(xs, ys, first, stop - 1, std::move(tag));
}

std::vector<std::size_t> energy_monotonicity(const std::vector<double>& energies, double slack) {
  if (!(slack >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "energy_monotonicity: slack must be >= 0");
  std::vector<std::size_t> violations;
  if (energies.empty()) return violations;
  const double allowance = slack * (1.0 + std::abs(energies.front()));
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] > energies[i - 1] + allowance) violations.push_back(i);
  }
  return violations;
}

}  // namespace aapda
