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
#include <string>
#include <vector>

#include "fringebrush/io.hpp"
#include "fringebrush/measurement.hpp"
#include "fringebrush/reconstruct.hpp"
#include "fringebrush/scene.hpp"

namespace fringebrush {

// One image-quality measurement plus the run settings that produced it.
// `noise_variance` echoes the requested grid value (absolute variance or
// relative fraction, whichever the run used).
struct PsnrReport {
  std::string mode;     // "col" or "row"
  std::string method;   // "hadamard" or "tv"
  double ratio = 1.0;
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
  std::string subject;  // "reflectivity" or "phase"
  double mse = 0.0;
  double psnr_db = 0.0;
  bool infinite = false;  // set exactly when mse == 0
  int p = 0;              // image height
  int q = 0;              // image width
  long masked_pixels = 0;
};

// Affine rescale of [min, max] onto [0, 255], kept as real values (no
// rounding).  A constant map rescales to all zeros.  Non-finite input
// throws.  Maps that already span [0, 255] pass through bit-for-bit.
FloatMap normalize_u8(const FloatMap& map);

// Mean squared error and peak signal-to-noise ratio over two maps already
// normalized to [0, 255]: PSNR = 10*log10(255^2 / MSE).  An MSE below 1e-12
// (squared 8-bit units) is floating-point residue of an exact recovery --
// more than ten orders of magnitude under any physically meaningful error --
// and snaps to exactly zero, which reports as infinite.
PsnrReport psnr(const FloatMap& reference, const FloatMap& test);

// Same, but summing only pixels whose mask byte is nonzero; the excluded
// count is recorded and the pixel count in the mean is reduced accordingly.
PsnrReport psnr_masked(const FloatMap& reference, const FloatMap& test,
                       const ByteImage& valid);

// Renders reports as CSV with the fixed header
//   mode,method,ratio,noise_variance,seed,subject,mse,psnr_db,masked_pixels
// sorted by (mode, ratio, noise_variance, seed), reflectivity rows before
// phase rows within a cell.  Numbers use up to 12 significant digits with a
// "." decimal separator; an infinite PSNR prints as "inf".
std::string psnr_csv(std::vector<PsnrReport> reports);
void write_psnr_csv(const std::string& path,
                    const std::vector<PsnrReport>& reports);

// Grid study settings: every (mode, ratio, variance, seed) cell runs the
// whole simulate-reconstruct-extract chain on the scene and reports PSNR of
// the recovered reflectivity (against the scene's) and of the recovered
// phase (against the scene's), each in [0, 255] units.  Reflectivity maps
// are min-max normalized; phase maps use the fixed scale 255 / (2*pi) that
// spans one full turn.  With kRelative noise, every variance is one fraction
// of a single gauge -- the value variance of a noiseless full-sampling
// column-mode measurement of this scene -- so a fraction means the same
// physical noise level in every cell regardless of mode, ratio, or method.
struct SweepConfig {
  FringeParams params;
  int variant = 0;
  Ordering ordering = Ordering::kCakeCutting;
  SolverConfig solver;
  std::vector<Mode> modes{Mode::kCol};
  std::vector<double> ratios{1.0};
  std::vector<double> variances{0.0};
  NoiseKind noise_kind = NoiseKind::kAbsolute;
  std::vector<std::uint64_t> seeds{0};
  int workers = 1;
};

// Runs the grid on channel 0 of the scene and returns the reports already
// in CSV order.  Identical inputs give identical reports; the worker count
// never changes any value.
std::vector<PsnrReport> run_sweep(const Scene& scene, const SweepConfig& cfg);

}  // namespace fringebrush
