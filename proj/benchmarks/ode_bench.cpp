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


#include <benchmark/benchmark.h>

#include "aapda/ode.hpp"
#include "aapda/problem.hpp"

namespace {

using aapda::Vector;

void BM_OdeRhs(benchmark::State& state) {
  const aapda::Index n = state.range(0);
  const aapda::Problem p = aapda::gen_equality_qp(n, n, 1.5, aapda::RngSpec{1});
  aapda::OdeParams params;
  params.q = 2.0;
  params.p = 3.0;
  const aapda::OdeState s = aapda::initial_state(p, params, Vector::Ones(n));
  for (auto _ : state) benchmark::DoNotOptimize(aapda::rhs(s, params, p));
}

void integrate_example(benchmark::State& state, double q, double pp, aapda::OdeMethod method, double t_end) {
  const aapda::Problem p = aapda::gen_equality_qp(2, 2, 1.5, aapda::RngSpec{1});
  aapda::OdeParams params;
  params.q = q;
  params.p = pp;
  params.method = method;
  params.t_end = t_end;
  const aapda::OdeState init = aapda::initial_state(p, params, Vector::Ones(2));
  std::size_t rows = 0;
  for (auto _ : state) {
    const aapda::TrajectoryRecord rec = aapda::integrate(p, init, params);
    rows = rec.rows.size();
    benchmark::DoNotOptimize(rec.final_state.x);
  }
  state.counters["rows"] = static_cast<double>(rows);
}

void BM_IntegrateOpenLoopDopri5(benchmark::State& s) {
  integrate_example(s, 1.0, 1.0, aapda::OdeMethod::kDormandPrince, 51.0);
}
void BM_IntegrateOpenLoopRosenbrock(benchmark::State& s) {
  integrate_example(s, 1.0, 1.0, aapda::OdeMethod::kRosenbrock, 51.0);
}
void BM_IntegrateClosedLoopRosenbrock(benchmark::State& s) {
  integrate_example(s, 2.0, 3.0, aapda::OdeMethod::kRosenbrock, 100.0);
}

}  // namespace

BENCHMARK(BM_OdeRhs)->RangeMultiplier(4)->Range(2, 512);
BENCHMARK(BM_IntegrateOpenLoopDopri5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateOpenLoopRosenbrock)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateClosedLoopRosenbrock)->Unit(benchmark::kMillisecond);
