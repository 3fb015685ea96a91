// Copyright 2026 The vqinit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vqinit {

/// Seeded random stream with portable output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard library's distributions are implementation-defined,
/// so the variates are derived here explicitly:
///   uniform01: top 53 bits of one engine word, scaled into [0, 1).
///   normal:    Box-Muller on two uniforms; the sine branch is cached and
///              returned by the next call.
/// Given the same seed, every platform produces the same doubles.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    double x = lo + (hi - lo) * uniform01();
    // Rounding in lo + (hi-lo)*u can land exactly on hi.
    return x < hi ? x : std::nextafter(hi, lo);
  }

  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // 1 - u lies in (0, 1], keeping the logarithm finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(phase);
    has_cached_ = true;
    return r * std::cos(phase);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Stream for round `round` of an experiment seeded with `base_seed`.
inline Rng round_stream(std::uint64_t base_seed, std::uint64_t round) {
  return Rng(base_seed + round);
}

}  // namespace vqinit
