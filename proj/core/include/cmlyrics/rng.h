// Copyright 2026 The cmlyrics Authors.
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

#ifndef CMLYRICS_RNG_H_
#define CMLYRICS_RNG_H_

#include <cstdint>
#include <span>
#include <utility>

namespace cmlyrics {

// xoshiro256** 1.0 (Blackman & Vigna), state expanded from a 64-bit seed with
// splitmix64. Every draw used anywhere in the library goes through this class
// so results are reproducible across platforms and standard libraries; the
// <random> distributions are implementation-defined and are not used.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound) by rejection sampling (no modulo bias).
  // bound must be > 0.
  uint64_t Below(uint64_t bound);

  // Fisher-Yates, iterating i from n-1 down to 1 and swapping with Below(i+1).
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t s_[4];
};

// splitmix64 step; exposed for seed derivation.
uint64_t SplitMix64(uint64_t& state);

}  // namespace cmlyrics

#endif  // CMLYRICS_RNG_H_
