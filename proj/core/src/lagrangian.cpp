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

#include "aapda/lagrangian.hpp"

#include <cmath>

#include "aapda/error.hpp"
#include "aapda/format.hpp"

namespace aapda {

LagrangianEval eval_lagrangian(const Problem& problem, const Vector& x, const Vector& lambda) {
  LagrangianEval ev;
  ev.grad_lambda = problem.constraint_matvec(x) - problem.rhs();
  ev.grad_x = problem.f_grad(x) + problem.constraint_adjoint(lambda);
  ev.value = problem.f_value(x) + lambda.dot(ev.grad_lambda);
  ev.grad_x_norm = ev.grad_x.norm();
  return ev;
}

double objective_gap(const Problem& problem, const Vector& x, const Vector& x_star) {
  if (const auto& q = problem.quadratic_form()) {
    const Vector d = x - x_star;
    return q->gradient(x_star).dot(d) + 0.5 * d.dot(q->apply(d));
  }
  return problem.f_value(x) - problem.f_value(x_star);
}

double pd_gap(const Problem& problem, const Vector& x, const SaddlePoint& saddle) {
  // L(x, l*) - L(x*, l*) = f(x) - f(x*) + <A^T l*, x - x*>. For quadratics the
  // two first-order terms are summed as vectors first: their sum is the KKT
  // residual and is tiny, while each alone is not.
  const Vector d = x - saddle.x_star;
  const Vector adj = problem.constraint_adjoint(saddle.lambda_star);
  double gap = 0.0;
  if (const auto& q = problem.quadratic_form()) {
    gap = (q->gradient(saddle.x_star) + adj).dot(d) + 0.5 * d.dot(q->apply(d));
  } else {
    gap = problem.f_value(x) - problem.f_value(saddle.x_star) + adj.dot(d);
  }
  if (gap >= 0.0) return gap;

  const double l_star = problem.f_value(saddle.x_star) +
                        saddle.lambda_star.dot(problem.constraint_matvec(saddle.x_star) - problem.rhs());
  const double floor = -1e-12 * (1.0 + std::abs(l_star));
  if (gap >= floor) return 0.0;
  throw Error(ErrorCode::kSaddleCertificateInvalid,
              "pd_gap: L(x, lambda*) - L(x*, lambda*) = " + format_double(gap) +
                  " is negative beyond tolerance; (x*, lambda*) is not a saddle point");
}

}  // namespace aapda
