/*
Copyright 2026 The Fringebrush Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>

namespace fringebrush {

// splitmix64 step: advances the state and returns a mixed 64-bit value.
// Small, fast, and fully specified here so that noise streams reproduce
// bit-for-bit on any platform (the standard library's distributions are
// implementation-defined and would not).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic Gaussian stream addressed by (master seed, stream id).
// Distinct ids yield decorrelated streams, and a stream's output depends only
// on its own draw count, so consumers may be evaluated in any order or in
// parallel without changing a single sample.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : state_(master_seed) {
    // Fold the stream id into the state through two mixing rounds so that
    // adjacent ids do not produce correlated initial states.
    splitmix64(state_);
    state_ ^= 0x9E3779B97F4A7C15ull * (stream_id + 1);
    splitmix64(state_);
  }

  // Uniform double in (0, 1]; never returns 0 so log() below is safe.
  double next_uniform() {
    return static_cast<double>((splitmix64(state_) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second sample of each pair is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fringebrush
