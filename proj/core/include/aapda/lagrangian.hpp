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

#include "aapda/problem.hpp"

namespace aapda {

/// L(x, lambda) = f(x) + <lambda, A x - b> and both partial gradients.
struct LagrangianEval {
  double value = 0.0;
  Vector grad_x;       // grad f(x) + A^T lambda
  Vector grad_lambda;  // A x - b
  double grad_x_norm = 0.0;
};

LagrangianEval eval_lagrangian(const Problem& problem, const Vector& x, const Vector& lambda);

/// L(x, lambda*) - L(x*, lambda*). Values in [-1e-12 * scale, 0) are clamped
/// to zero; anything more negative means the certificate is not a saddle
/// point and raises kSaddleCertificateInvalid.
double pd_gap(const Problem& problem, const Vector& x, const SaddlePoint& saddle);

/// f(x) - f(x*). For quadratic objectives this is evaluated as
/// <Q x* + c, d> + 1/2 d^T Q d with d = x - x*, which avoids cancelling two
/// nearly equal objective values.
double objective_gap(const Problem& problem, const Vector& x, const Vector& x_star);

}  // namespace aapda
