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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "aapda/error.hpp"
#include "aapda/format.hpp"
#include "aapda/problem.hpp"

namespace aapda {
namespace {

// Stream ids for Rng::split. Each random component draws from its own stream
// so that, e.g., the support choice does not depend on how many normals A used.
constexpr std::uint64_t kStreamMatrix = 1;
constexpr std::uint64_t kStreamPlanted = 2;
constexpr std::uint64_t kStreamSupport = 3;
constexpr std::uint64_t kStreamRhs = 4;

// Partial Fisher-Yates: the first k entries of the returned permutation.
std::vector<std::uint64_t> sample_without_replacement(Rng& rng, std::uint64_t population,
                                                      std::uint64_t k) {
  std::vector<std::uint64_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + rng.uniform_index(population - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

Problem gen_equality_qp(Index n, Index m, double mu, RngSpec spec) {
  if (n < 1 || m < 1) {
    throw Error(ErrorCode::kInvalidDimension, "gen_equality_qp: n and m must be >= 1");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kInvalidParameter, "gen_equality_qp: mu must be a finite nonnegative number");
  }
  const Rng root(spec);

  Rng a_rng = root.split(kStreamMatrix);
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = a_rng.normal();
  }

  // N(0, 4), clipped to [-2, 2], then all but ceil(n/100) entries zeroed.
  Rng x_rng = root.split(kStreamPlanted);
  Vector dense_draw(n);
  for (Index j = 0; j < n; ++j) dense_draw(j) = std::clamp(2.0 * x_rng.normal(), -2.0, 2.0);

  const auto support_size = static_cast<std::uint64_t>((n + 99) / 100);
  Rng s_rng = root.split(kStreamSupport);
  const auto support = sample_without_replacement(s_rng, static_cast<std::uint64_t>(n), support_size);
  Vector planted = Vector::Zero(n);
  for (auto j : support) planted(static_cast<Index>(j)) = dense_draw(static_cast<Index>(j));

  Vector b = a * planted;

  ProblemDescriptor desc;
  desc.generator = "equality_qp";
  desc.params = {{"n", std::to_string(n)},
                 {"m", std::to_string(m)},
                 {"mu", format_double(mu)},
                 {"rng", std::string(RngSpec::kAlgorithm)}};
  desc.seed = spec.seed;

  Problem problem = Problem::quadratic(QuadraticForm::scaled_identity(mu, n),
                                       ConstraintOperator::from_dense(std::move(a)),
                                       std::move(b), std::move(desc));
  problem.set_planted(std::move(planted));
  return problem;
}

Problem gen_least_squares(Index m, Index n, double density, RngSpec spec) {
  if (m < 1 || n < 1) {
    throw Error(ErrorCode::kInvalidDimension, "gen_least_squares: m and n must be >= 1");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "gen_least_squares: density must lie in (0, 1]");
  }
  const Rng root(spec);
  const auto cells = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
  const auto nnz = std::min<std::uint64_t>(
      cells, static_cast<std::uint64_t>(std::llround(density * static_cast<double>(cells))));

  Rng pos_rng = root.split(kStreamSupport);
  auto positions = sample_without_replacement(pos_rng, cells, nnz);
  // Sorted so that values are assigned in row-major order independent of the
  // shuffle internals.
  std::sort(positions.begin(), positions.end());

  Rng val_rng = root.split(kStreamMatrix);
  Matrix a = Matrix::Zero(m, n);
  for (auto pos : positions) {
    const auto i = static_cast<Index>(pos / static_cast<std::uint64_t>(n));
    const auto j = static_cast<Index>(pos % static_cast<std::uint64_t>(n));
    a(i, j) = val_rng.uniform(0.0, 0.1);
  }

  Rng b_rng = root.split(kStreamRhs);
  Vector b(m);
  for (Index i = 0; i < m; ++i) b(i) = b_rng.uniform(0.0, 1.0);

  ProblemDescriptor desc;
  desc.generator = "least_squares";
  desc.params = {{"m", std::to_string(m)},
                 {"n", std::to_string(n)},
                 {"density", format_double(density)},
                 {"nnz", std::to_string(nnz)},
                 {"b_distribution", "uniform[0,1]"},
                 {"rng", std::string(RngSpec::kAlgorithm)}};
  desc.seed = spec.seed;
  return Problem::least_squares(std::move(a), std::move(b), std::move(desc));
}

}  // namespace aapda
