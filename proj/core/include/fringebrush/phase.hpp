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

#include "fringebrush/fringe.hpp"
#include "fringebrush/io.hpp"

namespace fringebrush {

// The four phase-shifted images of one scene, all at scene resolution;
// frames[k] collects the samples whose shift index is k.
struct PhaseStack {
  std::array<FloatMap, 4> frames;

  int height() const { return frames[0].height(); }
  int width() const { return frames[0].width(); }
};

// Wrapped phase plus a validity mask (255 = valid, 0 = degenerate pixel with
// no measurable modulation).
struct WrappedPhase {
  FloatMap phase;  // values in (-pi, pi], 0 at masked pixels
  ByteImage mask;
};

// Carrier phase maps of the illumination itself, used as the subtraction
// reference.  kNumeric runs the full extraction on a unit-reflectivity,
// zero-phase scene; kAnalytic evaluates the closed-form carrier (only
// available for the cell-constant carrier, where the four samples of a scene
// point share one carrier value).
enum class ReferencePath { kNumeric, kAnalytic };

struct ReferenceMaps {
  FloatMap wrapped;
  FloatMap unwrapped;
  ByteImage mask;
};

// Folds x into (-pi, pi].
inline double fold_to_signed_pi(double x) {
  return x - kTwoPi * std::ceil((x - kPi) / kTwoPi);
}

// Folds x into [0, 2*pi).
inline double fold_to_two_pi(double x) {
  return x - kTwoPi * std::floor(x / kTwoPi);
}

// Splits an interleaved mosaic into the four phase-shift images.  In column
// mode the mosaic is H x 4W and scene point (u, x) owns mosaic pixels
// (u, 4x..4x+3); in row mode it is 4H x W and scene point (y, v) owns pixels
// (4y..4y+3, v).  Within each 4-pixel run, the pixel whose arrangement entry
// is k feeds frames[k].  Throws if the interleaved axis is not a multiple
// of 4.
PhaseStack deinterleave(const FloatMap& mosaic, const ArrangementMatrix& arr,
                        Mode mode);

// Exact inverse of deinterleave: rebuilds the mosaic from the four frames.
FloatMap interleave(const PhaseStack& stack, const ArrangementMatrix& arr,
                    Mode mode);

// Four-step phase extraction: atan2(F3 - F1, F0 - F2) per pixel, folded so
// the output lies in (-pi, pi].  Pixels where both differences are below
// 1e-12 in magnitude carry no phase information; they are set to 0 and
// cleared in the mask.
WrappedPhase wrapped_phase(const PhaseStack& stack);

// Sequential unwrapping from the image center: the middle row is unwrapped
// outward from its center pixel, then every column is unwrapped vertically
// away from that row.  Successive differences along each path are folded
// into (-pi, pi] and integrated.  Masked pixels inherit the running
// unwrapped value without contributing jumps; a later valid pixel continues
// integration against the last valid one.  Regions never touched by a valid
// anchor restart at their own wrapped values, so the output is continuous up
// to one global 2*pi multiple per connected region.
FloatMap unwrap_2d(const FloatMap& wrapped, const ByteImage& valid);

// Carrier phase of the bare illumination over a height x width scene grid
// (pre-stretch dimensions).  The numeric path modulates a unit scene and
// runs deinterleave -> wrapped_phase -> unwrap_2d; the analytic path fills
// in the closed-form carrier directly and throws for per-pixel carriers.
// Both produce the same wrapped map and unwrapped maps equal up to one
// global 2*pi multiple.
ReferenceMaps reference_phase_maps(const FringeParams& params,
                                   const ArrangementMatrix& arr, Mode mode,
                                   int height, int width,
                                   ReferencePath path = ReferencePath::kNumeric);

// Pointwise difference of the unwrapped maps, folded into [0, 2*pi) so the
// global 2*pi ambiguity of unwrapping drops out.
FloatMap phase_difference(const FloatMap& unwrapped,
                          const FloatMap& reference_unwrapped);

// Reflectivity from the quadrature pair: sqrt((F3-F1)^2 + (F0-F2)^2) / (2b).
// Exact for four-step data and defined at every pixel.  Throws if b <= 0.
FloatMap recover_reflectivity(const PhaseStack& stack,
                              const FringeParams& params);

struct ReflectivityDivision {
  FloatMap reflectivity;
  ByteImage mask;  // 0 where every shift landed near a cosine zero
};

// Literal per-sample division: each frame value is divided by its modeled
// modulation a + b*cos(theta + k*pi/2), where theta is the wrapped total
// phase estimate, and the quotients are averaged over the shifts whose
// cosine magnitude exceeds 1e-3.  Pixels with no usable shift are masked.
ReflectivityDivision recover_reflectivity_division(const PhaseStack& stack,
                                                   const FringeParams& params,
                                                   const FloatMap& total_phase);

struct ColorBytes {
  ByteImage r, g, b;
};

// Quantizes three channels to bytes with one shared affine scale: the global
// minimum over all three maps goes to 0 and the global maximum to 255.  A
// constant triple quantizes to all zeros.
ColorBytes merge_color(const FloatMap& r, const FloatMap& g,
                       const FloatMap& b);

}  // namespace fringebrush
