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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aapda/baselines.hpp"
#include "aapda/error.hpp"
#include "aapda/ode.hpp"
#include "aapda/solver.hpp"

namespace bench {

// Experiment files are line oriented:
//
//   # comment
//   [experiment]
//   tag = example1
//   n = 10
//   ...
//   [solver aapda-p4]
//   method = aapda
//   p = 4
//   [output]
//   dir = out/example1
//
// Each `[solver NAME]` section adds one run; NAME becomes the CSV file stem.

enum class ExperimentTag { kExample1, kExample2, kCustom, kOde };
enum class SolverKind { kAapda, kLinAlm, kFista, kOde };
enum class InitPoint { kZeros, kOnes };

std::string_view to_string(ExperimentTag tag);
std::string_view to_string(SolverKind kind);

struct SolverConfig {
  std::string name;
  SolverKind kind = SolverKind::kAapda;
  /// Only the member matching `kind` is meaningful.
  aapda::AapdaOptions aapda;
  aapda::BaselineOptions baseline;
  aapda::OdeParams ode;
  /// Resolved key = value pairs in file order, echoed into summary.txt.
  std::vector<std::pair<std::string, std::string>> settings;
};

struct ExperimentConfig {
  ExperimentTag tag = ExperimentTag::kExample1;
  aapda::Index n = 0;
  aapda::Index m = 0;
  double mu = 0.0;
  double density = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> theta;
  /// Problem file for the custom tag, resolved against the config location.
  std::string problem_path;
  InitPoint x_init = InitPoint::kOnes;
  std::vector<SolverConfig> solvers;
  std::string out_dir = "out";
  bool plot = true;
};

struct ConfigIssue {
  int line = 0;
  std::string message;
};

/// Every problem found in a config file, in line order.
class ConfigError : public aapda::Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);

  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// `base_dir` anchors relative paths (the custom problem file).
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");

/// Reads and parses a file. Raises aapda::Error(kIo) when unreadable.
ExperimentConfig load_config(const std::string& path);

}  // namespace bench
