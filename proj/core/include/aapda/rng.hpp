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
#include <string_view>

namespace aapda {

/// Seed plus generator identity. Only one generator exists repo-wide, so the
/// tag is informational and ends up in problem and trace headers.
struct RngSpec {
  std::uint64_t seed = 0;
  static constexpr std::string_view kAlgorithm = "splitmix64-counter";
};

/// Counter-based SplitMix64 stream: the i-th output is mix(seed + i * golden).
/// Distributions are implemented here rather than taken from <random> because
/// the standard distributions are not specified bit-for-bit.
class Rng {
 public:
  explicit Rng(RngSpec spec) : key_(spec.seed) {}

  /// Independent child stream; same (parent, stream) always yields the same child.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Unbiased integer in [0, bound).
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal, Marsaglia polar method.
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  Rng(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

}  // namespace aapda
