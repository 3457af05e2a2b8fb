// Copyright 2026 The Clarify Authors
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

#include <algorithm>
#include <cstdint>

namespace clarify {

// Park-Miller minimal standard generator. Reproducible bit-for-bit in any
// language, which std::uniform_*_distribution is not.
class ParkMillerLcg {
 public:
  static constexpr std::uint64_t kMultiplier = 16807;
  static constexpr std::uint64_t kModulus = 2147483647;

  explicit ParkMillerLcg(std::int64_t seed)
      : state_(static_cast<std::uint64_t>(std::max<std::int64_t>(seed, 1)) % kModulus) {
    if (state_ == 0) state_ = 1;
  }

  // Advances and returns the new state, in [1, kModulus - 1].
  std::uint64_t next() {
    state_ = (kMultiplier * state_) % kModulus;
    return state_;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  // Uniform in (0, 1).
  double uniform() { return static_cast<double>(next()) / static_cast<double>(kModulus); }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace clarify
