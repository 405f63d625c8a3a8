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

#include <memory>
#include <optional>
#include <string_view>

#include "aapda/error.hpp"
#include "aapda/problem.hpp"

namespace aapda {

/// The primal step of one AAPDA iteration:
///
///   argmin_x  f(x) + prox_weight ||x - xbar||^2 + penalty_weight ||A x - sigma||^2
///
/// with prox_weight = (gamma+tau)/(4 gamma^2) and penalty_weight = (gamma+tau)/2,
/// gamma = gamma_{k+1}, tau = tau_{k+1}.
struct SubproblemSpec {
  const Problem* problem = nullptr;
  Vector xbar;
  Vector sigma;
  double gamma_next = 1.0;
  double tau_next = 0.0;
  double prox_weight = 0.0;
  double penalty_weight = 0.0;

  static SubproblemSpec make(const Problem& problem, Vector xbar, Vector sigma,
                             double gamma_next, double tau_next);
};

enum class SubMethod { kDirect, kConjugateGradient, kInnerAcceleratedGradient };

std::string_view to_string(SubMethod method);

struct SubSolution {
  Vector x_next;
  double stationarity_norm = 0.0;
  SubMethod method = SubMethod::kDirect;
  Index inner_iterations = 0;
  /// The tolerance was below the rounding floor of the stationarity
  /// evaluation at x_next and the floor was accepted instead.
  bool floor_limited = false;
};

/// Eigendecomposition of the part of the direct-path system that does not
/// change between iterations. Available when the changing part is a multiple
/// of the identity: dense Q with m = 0 (fixed part Q), or Q = c I with
/// constraints (fixed part A^T A). Solves then cost O(n^2).
class SpectralFactor {
 public:
  /// nullopt when the problem does not have one of the two shapes above.
  static std::optional<SpectralFactor> build(const Problem& problem);

  /// Solves (Q + 2 prox I + 2 pen A^T A) x = rhs.
  Vector solve(double prox_weight, double penalty_weight, const Vector& rhs) const;

 private:
  Matrix basis_;
  Vector eigenvalues_;
  // Q = identity_scale I when the fixed part is A^T A.
  double identity_scale_ = 0.0;
  bool fixed_is_gram_ = false;
};

/// Direct paths switch from Cholesky to a SpectralFactor at this size.
inline constexpr Index kSpectralMinDim = 256;

struct SubsolverOptions {
  /// Quadratic problems with n at or below this use a dense factorization.
  Index direct_threshold = 2000;
  /// Bypasses the dispatch rule (tests compare paths with it).
  std::optional<SubMethod> force_method;
  /// 0 selects max(10 n, 1000).
  Index max_inner_iterations = 0;
  /// ||A|| for the inner gradient step; estimated on demand when absent.
  std::optional<double> constraint_norm;
  /// Used by the direct path when present.
  std::shared_ptr<const SpectralFactor> spectral;
};

/// Raised when an iterative inner solve runs out of iterations. Carries the
/// best iterate found and the stationarity it achieved.
class SubproblemNotConverged : public Error {
 public:
  SubproblemNotConverged(const std::string& what, Vector best, double achieved)
      : Error(ErrorCode::kSubproblemNotConverged, what),
        best_(std::move(best)),
        achieved_(achieved) {}

  const Vector& best_iterate() const { return best_; }
  double achieved_stationarity() const { return achieved_; }

 private:
  Vector best_;
  double achieved_;
};

/// Gradient of the subproblem objective at x.
Vector subproblem_gradient(const SubproblemSpec& spec, const Vector& x);
double stationarity_norm(const SubproblemSpec& spec, const Vector& x);
double subproblem_objective(const SubproblemSpec& spec, const Vector& x);

/// Rounding-error level of stationarity_norm(spec, x): a small multiple of
/// machine epsilon times the sum of the magnitudes of the terms it adds up.
/// No stored x can be certified below it.
double stationarity_floor(const SubproblemSpec& spec, const Vector& x);

/// Returns x with stationarity_norm <= max(tol * (1 + ||xbar||), floor).
SubSolution solve_subproblem(const SubproblemSpec& spec, double tol,
                             const SubsolverOptions& options = {});

/// Power iteration from the normalized all-ones vector. Returns ||A|| when the
/// problem has constraints and ||Q|| (the gradient Lipschitz constant of a
/// quadratic f) otherwise.
double operator_norm_estimate(const Problem& problem, int iters);
double constraint_norm_estimate(const Problem& problem, int iters);
double hessian_norm_estimate(const Problem& problem, int iters);

}  // namespace aapda
