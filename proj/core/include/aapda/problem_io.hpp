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

#include <iosfwd>
#include <string>

#include "aapda/problem.hpp"

namespace aapda {

// Text exchange format for problem instances:
//
//   format = aapda-problem/1
//   generator = equality_qp
//   param.n = 10
//   seed = 7
//   dim_primal = 10
//   dim_dual = 10
//   objective = quadratic            (or least_squares)
//   quadratic.kind = scaled_identity (or dense)
//   quadratic.scale = 1.5
//   quadratic.constant = 0
//   vector c 10
//   0 0 0 ...
//   matrix A 10 10
//   <one row per line>
//   vector b 10
//   ...
//   end
//
// Numbers are written in shortest round-trip form, so write -> read -> write
// is byte-stable. Only quadratic and least-squares objectives are exportable.

void write_problem(std::ostream& out, const Problem& problem);
Problem read_problem(std::istream& in);

void save_problem(const std::string& path, const Problem& problem);
Problem load_problem(const std::string& path);

}  // namespace aapda
