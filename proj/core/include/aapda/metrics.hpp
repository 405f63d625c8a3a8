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

#include <cstddef>
#include <string>
#include <vector>

#include "aapda/problem.hpp"
#include "aapda/trace.hpp"

namespace aapda {

struct ResidualSeries {
  std::vector<double> pd_gap;
  std::vector<double> feasibility;
  /// |f(x_k) - f(x*)|.
  std::vector<double> objective_gap;
};

/// Recomputes the three residuals from the iterates stored in the trace.
ResidualSeries residual_series(const Trace& trace, const Problem& problem, const SaddlePoint& saddle);

/// Least-squares line through (log x_i, log y_i) over a window.
struct RateReport {
  std::string series;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Inclusive indices into the input series.
  std::size_t first = 0;
  std::size_t last = 0;
  /// r^2 of log y against x (linear x) on the same window.
  double exp_r_squared = 0.0;
  /// The exponential model explains the window better than the power law.
  bool looks_exponential = false;
};

/// Fits y_k against k = 1, 2, ... after discarding the first burn_in fraction.
/// Entries from the first value <= 1e-300 onward are dropped. Raises
/// kInsufficientData with fewer than five usable points.
RateReport fit_rate(const std::vector<double>& series, double burn_in = 0.3, std::string tag = {});

/// Same fit with explicit abscissae (e.g. ODE times), restricted to x in
/// [x_min, x_max] and without burn-in.
RateReport fit_rate_xy(const std::vector<double>& xs, const std::vector<double>& ys, double x_min,
                       double x_max, std::string tag = {});

/// Indices i >= 1 with E_i > E_{i-1} + slack (1 + E_0).
std::vector<std::size_t> energy_monotonicity(const std::vector<double>& energies, double slack);

}  // namespace aapda
