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

#include <array>
#include <cmath>

#include "fringebrush/float_map.hpp"

namespace fringebrush {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = kPi / 2.0;

// Scanning geometry: kCol stretches scene columns fourfold (one scene column
// becomes four image columns), kRow stretches scene rows fourfold.
enum class Mode { kCol, kRow };

// Carrier evaluation for the reorganized fringe.  kCellConstant freezes the
// stretched coordinate within every 4-pixel cell so the four phase-shifted
// samples of a scene point share one carrier value, which makes the four-step
// phase extraction exact.  kPerPixel keeps the raw pixel coordinate.
enum class Carrier { kCellConstant, kPerPixel };

// Sinusoidal fringe description: value at pixel (u, v) for phase-shift index
// k is a + b * cos(2*pi*f_u*v + 2*pi*f_v*u + phi0 + k*pi/2).
struct FringeParams {
  double f_u = 1.0 / 50.0;  // cycles per pixel as the column index advances
  double f_v = 1.0 / 50.0;  // cycles per pixel as the row index advances
  double phi0 = 3.0 * kPi / 2.0;
  double a = 0.0;  // background intensity
  double b = 1.0;  // modulation amplitude
  Carrier carrier = Carrier::kCellConstant;
};

// 4x4 Latin square assigning one of the four phase-shift indices to every
// pixel of a repeating cell: entry(r, c) = (r + c + variant) mod 4.  Every
// row and column contains each index exactly once and the anti-diagonal is
// constant, so any 4-pixel cell row or column covers all four phase steps.
class ArrangementMatrix {
 public:
  static constexpr int kCell = 4;

  explicit ArrangementMatrix(int variant) : variant_(variant) {
    if (variant < 0 || variant >= kCell) {
      throw std::invalid_argument("ArrangementMatrix: variant must be 0..3");
    }
    for (int r = 0; r < kCell; ++r) {
      for (int c = 0; c < kCell; ++c) {
        entries_[r][c] = (r + c + variant) % kCell;
      }
    }
  }

  int variant() const { return variant_; }
  int entry(int r, int c) const { return entries_[r][c]; }

  // Phase-shift index owned by absolute pixel (u, v).
  int index_at(int u, int v) const {
    return entries_[u % kCell][v % kCell];
  }

 private:
  int variant_ = 0;
  std::array<std::array<int, kCell>, kCell> entries_{};
};

// Carrier coordinates seen by pixel (u, v): a cell-constant carrier holds the
// stretched axis at its 4-wide cell index so all four shifts of a cell share
// one carrier value; a per-pixel carrier advances inside the cell.
struct CarrierCoords {
  double u;
  double v;
};
inline CarrierCoords carrier_coords(const FringeParams& p, Mode mode, int u,
                                    int v) {
  if (p.carrier == Carrier::kCellConstant) {
    if (mode == Mode::kCol) {
      return {static_cast<double>(u),
              static_cast<double>(v / ArrangementMatrix::kCell)};
    }
    return {static_cast<double>(u / ArrangementMatrix::kCell),
            static_cast<double>(v)};
  }
  return {static_cast<double>(u), static_cast<double>(v)};
}

// Total cosine argument (carrier + offset + scene phase + shift), shared by
// every synthesizer so that equal inputs produce bitwise-equal values across
// code paths.
inline double fringe_argument(const FringeParams& p, double carrier_u,
                              double carrier_v, int k, double scene_phase) {
  return kTwoPi * p.f_u * carrier_v + kTwoPi * p.f_v * carrier_u + p.phi0 +
         scene_phase + k * kHalfPi;
}

inline double fringe_sample(const FringeParams& p, double carrier_u,
                            double carrier_v, int k, double scene_phase) {
  double arg = fringe_argument(p, carrier_u, carrier_v, k, scene_phase);
  return p.a + p.b * std::cos(arg);
}

// Plain four-step phase-shifting fringe I_k, k in 0..3.
FloatMap phase_shift_fringe(int height, int width, const FringeParams& params,
                            int k);

// Single-frame fringe with the four phase-shifted patterns interleaved
// pixel-by-pixel according to the arrangement matrix.  `mode` selects which
// axis the cell-constant carrier quantizes; it is ignored for per-pixel
// carriers.
FloatMap jigsaw_fringe(int height, int width, const FringeParams& params,
                       const ArrangementMatrix& arr, Mode mode);

}  // namespace fringebrush
