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

#include <cstdint>
#include <vector>

#include "fringebrush/float_map.hpp"
#include "fringebrush/fringe.hpp"
#include "fringebrush/sensing_basis.hpp"

namespace fringebrush {

// How NoiseConfig::variance is interpreted: an absolute measurement-space
// variance, or a fraction of the variance of the noiseless measurement values
// of the same run (so sweep settings transfer across scene sizes).
enum class NoiseKind { kAbsolute, kRelative };

struct NoiseConfig {
  double variance = 0.0;
  NoiseKind kind = NoiseKind::kAbsolute;
  std::uint64_t seed = 0;
};

// Per-column measurement vectors c_i = basis * omega_i + e_i, where omega_i
// is image column i.  `noise_variance` records the absolute variance that was
// actually applied after resolving a relative request.
struct MeasurementSet {
  std::vector<std::vector<double>> columns;
  int basis_rows = 0;  // M
  int basis_cols = 0;  // N, the sensing length (image height)
  Ordering ordering = Ordering::kNatural;
  Mode mode = Mode::kCol;
  double noise_variance = 0.0;
  std::uint64_t seed = 0;

  int column_count() const { return static_cast<int>(columns.size()); }
};

// Measures every image column against the signed basis.  Noise for column i
// comes from the Gaussian stream addressed by (noise.seed, i), so results do
// not depend on evaluation order or on `workers`.
MeasurementSet measure_columns(const FloatMap& image,
                               const SensingBasis& basis, Mode mode,
                               const NoiseConfig& noise, int workers = 1);

// Measures with the unipolar positive and negative halves separately, drawing
// independent noise for each half (streams 2i and 2i+1), and returns the
// differenced values.  With zero noise this reproduces measure_columns
// bit-for-bit; with noise the differenced values carry twice the variance.
MeasurementSet measure_differential(const FloatMap& image,
                                    const BasisSplit& split, Mode mode,
                                    const NoiseConfig& noise, int workers = 1);

}  // namespace fringebrush
