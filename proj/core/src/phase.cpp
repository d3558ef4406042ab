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

#include "fringebrush/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fringebrush/scene.hpp"

namespace fringebrush {

namespace {

constexpr int kCell = ArrangementMatrix::kCell;
constexpr double kDegenerateEps = 1e-12;
constexpr double kDivisionCosineEps = 1e-3;

// offsets[r][k] = the position within a 4-pixel run at cross-index r whose
// arrangement entry equals k.  `by_row` selects whether the run advances
// along matrix columns (column mode) or rows (row mode).
std::array<std::array<int, kCell>, kCell> run_offsets(
    const ArrangementMatrix& arr, bool runs_along_columns) {
  std::array<std::array<int, kCell>, kCell> offsets{};
  for (int cross = 0; cross < kCell; ++cross) {
    for (int pos = 0; pos < kCell; ++pos) {
      const int k = runs_along_columns ? arr.entry(cross, pos)
                                       : arr.entry(pos, cross);
      offsets[cross][k] = pos;
    }
  }
  return offsets;
}

void require_stack_shape(const PhaseStack& stack) {
  for (int k = 1; k < kCell; ++k) {
    if (!stack.frames[k].same_shape(stack.frames[0])) {
      throw std::invalid_argument(
          "phase stack frames must share dimensions");
    }
  }
}

}  // namespace

PhaseStack deinterleave(const FloatMap& mosaic, const ArrangementMatrix& arr,
                        Mode mode) {
  PhaseStack stack;
  if (mode == Mode::kCol) {
    if (mosaic.width() % kCell != 0) {
      throw std::invalid_argument(
          "deinterleave: width must be a multiple of 4 in column mode");
    }
    const int h = mosaic.height();
    const int w = mosaic.width() / kCell;
    const auto offsets = run_offsets(arr, /*runs_along_columns=*/true);
    for (int k = 0; k < kCell; ++k) stack.frames[k] = FloatMap(h, w);
    for (int u = 0; u < h; ++u) {
      const auto& of = offsets[u % kCell];
      for (int x = 0; x < w; ++x) {
        for (int k = 0; k < kCell; ++k) {
          stack.frames[k](u, x) = mosaic(u, kCell * x + of[k]);
        }
      }
    }
  } else {
    if (mosaic.height() % kCell != 0) {
      throw std::invalid_argument(
          "deinterleave: height must be a multiple of 4 in row mode");
    }
    const int h = mosaic.height() / kCell;
    const int w = mosaic.width();
    const auto offsets = run_offsets(arr, /*runs_along_columns=*/false);
    for (int k = 0; k < kCell; ++k) stack.frames[k] = FloatMap(h, w);
    for (int y = 0; y < h; ++y) {
      for (int v = 0; v < w; ++v) {
        const auto& of = offsets[v % kCell];
        for (int k = 0; k < kCell; ++k) {
          stack.frames[k](y, v) = mosaic(kCell * y + of[k], v);
        }
      }
    }
  }
  return stack;
}

FloatMap interleave(const PhaseStack& stack, const ArrangementMatrix& arr,
                    Mode mode) {
  require_stack_shape(stack);
  const int h = stack.height();
  const int w = stack.width();
  if (mode == Mode::kCol) {
    FloatMap mosaic(h, kCell * w);
    const auto offsets = run_offsets(arr, /*runs_along_columns=*/true);
    for (int u = 0; u < h; ++u) {
      const auto& of = offsets[u % kCell];
      for (int x = 0; x < w; ++x) {
        for (int k = 0; k < kCell; ++k) {
          mosaic(u, kCell * x + of[k]) = stack.frames[k](u, x);
        }
      }
    }
    return mosaic;
  }
  FloatMap mosaic(kCell * h, w);
  const auto offsets = run_offsets(arr, /*runs_along_columns=*/false);
  for (int y = 0; y < h; ++y) {
    for (int v = 0; v < w; ++v) {
      const auto& of = offsets[v % kCell];
      for (int k = 0; k < kCell; ++k) {
        mosaic(kCell * y + of[k], v) = stack.frames[k](y, v);
      }
    }
  }
  return mosaic;
}

WrappedPhase wrapped_phase(const PhaseStack& stack) {
  require_stack_shape(stack);
  const int h = stack.height();
  const int w = stack.width();
  WrappedPhase out;
  out.phase = FloatMap(h, w);
  out.mask = ByteImage(h, w);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      const double num = stack.frames[3](u, v) - stack.frames[1](u, v);
      const double den = stack.frames[0](u, v) - stack.frames[2](u, v);
      if (std::fabs(num) < kDegenerateEps && std::fabs(den) < kDegenerateEps) {
        out.phase(u, v) = 0.0;
        out.mask.at(u, v) = 0;
        continue;
      }
      double a = std::atan2(num, den);
      if (a <= -kPi) a = kPi;  // close the interval on the +pi side
      out.phase(u, v) = a;
      out.mask.at(u, v) = 255;
    }
  }
  return out;
}

FloatMap unwrap_2d(const FloatMap& wrapped, const ByteImage& valid) {
  const int h = wrapped.height();
  const int w = wrapped.width();
  if (valid.height != h || valid.width != w) {
    throw std::invalid_argument("unwrap_2d: mask dimensions must match");
  }
  FloatMap out(h, w);

  // Walks from (u0, v0), whose output value must already be assigned, in
  // steps of (du, dv).  The running offset equals (unwrapped - wrapped) of
  // the last valid pixel and changes only by whole 2*pi jumps, so an input
  // that needs no jumps is returned bit-for-bit.
  auto walk = [&](int u0, int v0, int du, int dv) {
    bool anchored = valid.at(u0, v0) != 0;
    double prev_wrapped = wrapped(u0, v0);
    double inherited = out(u0, v0);
    double offset = anchored ? out(u0, v0) - wrapped(u0, v0) : 0.0;
    for (int u = u0 + du, v = v0 + dv; u >= 0 && u < h && v >= 0 && v < w;
         u += du, v += dv) {
      if (valid.at(u, v) != 0) {
        const double value = wrapped(u, v);
        if (anchored) {
          const double delta = value - prev_wrapped;
          offset -= kTwoPi * std::ceil((delta - kPi) / kTwoPi);
        } else {
          offset = 0.0;
          anchored = true;
        }
        out(u, v) = value + offset;
        prev_wrapped = value;
        inherited = out(u, v);
      } else {
        out(u, v) = inherited;
      }
    }
  };

  const int mid_u = h / 2;
  const int mid_v = w / 2;
  out(mid_u, mid_v) = wrapped(mid_u, mid_v);
  walk(mid_u, mid_v, 0, +1);
  walk(mid_u, mid_v, 0, -1);
  for (int v = 0; v < w; ++v) {
    walk(mid_u, v, -1, 0);
    walk(mid_u, v, +1, 0);
  }
  return out;
}

ReferenceMaps reference_phase_maps(const FringeParams& params,
                                   const ArrangementMatrix& arr, Mode mode,
                                   int height, int width,
                                   ReferencePath path) {
  if (path == ReferencePath::kAnalytic) {
    if (params.carrier != Carrier::kCellConstant) {
      throw std::invalid_argument(
          "analytic reference needs the cell-constant carrier; the per-pixel "
          "carrier has no shared per-point value");
    }
    if (height < 1 || width < 1) {
      throw std::invalid_argument("reference dimensions must be positive");
    }
    ReferenceMaps maps;
    maps.wrapped = FloatMap(height, width);
    maps.unwrapped = FloatMap(height, width);
    maps.mask = ByteImage(height, width);
    for (int u = 0; u < height; ++u) {
      for (int v = 0; v < width; ++v) {
        const double theta =
            kTwoPi * params.f_u * v + kTwoPi * params.f_v * u + params.phi0;
        maps.unwrapped(u, v) = theta;
        maps.wrapped(u, v) = fold_to_signed_pi(theta);
        maps.mask.at(u, v) = 255;
      }
    }
    return maps;
  }

  const int sh = mode == Mode::kCol ? height : kCell * height;
  const int sw = mode == Mode::kCol ? kCell * width : width;
  const FloatMap unit_reflectivity(sh, sw, 1.0);
  const FloatMap zero_phase(sh, sw, 0.0);
  const FloatMap mosaic =
      modulate_channel(unit_reflectivity, zero_phase, params, arr, mode);
  const PhaseStack stack = deinterleave(mosaic, arr, mode);
  WrappedPhase wp = wrapped_phase(stack);
  ReferenceMaps maps;
  maps.unwrapped = unwrap_2d(wp.phase, wp.mask);
  maps.wrapped = std::move(wp.phase);
  maps.mask = std::move(wp.mask);
  return maps;
}

FloatMap phase_difference(const FloatMap& unwrapped,
                          const FloatMap& reference_unwrapped) {
  if (!unwrapped.same_shape(reference_unwrapped)) {
    throw std::invalid_argument("phase_difference: dimensions must match");
  }
  FloatMap out(unwrapped.height(), unwrapped.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] =
        fold_to_two_pi(unwrapped.values()[i] - reference_unwrapped.values()[i]);
  }
  return out;
}

FloatMap recover_reflectivity(const PhaseStack& stack,
                              const FringeParams& params) {
  require_stack_shape(stack);
  if (!(params.b > 0.0)) {
    throw std::invalid_argument("reflectivity recovery needs b > 0");
  }
  const int h = stack.height();
  const int w = stack.width();
  FloatMap out(h, w);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      const double num = stack.frames[3](u, v) - stack.frames[1](u, v);
      const double den = stack.frames[0](u, v) - stack.frames[2](u, v);
      out(u, v) = std::hypot(num, den) / (2.0 * params.b);
    }
  }
  return out;
}

ReflectivityDivision recover_reflectivity_division(
    const PhaseStack& stack, const FringeParams& params,
    const FloatMap& total_phase) {
  require_stack_shape(stack);
  if (!(params.b > 0.0)) {
    throw std::invalid_argument("reflectivity recovery needs b > 0");
  }
  if (!total_phase.same_shape(stack.frames[0])) {
    throw std::invalid_argument(
        "recover_reflectivity_division: phase dimensions must match");
  }
  const int h = stack.height();
  const int w = stack.width();
  ReflectivityDivision out;
  out.reflectivity = FloatMap(h, w);
  out.mask = ByteImage(h, w);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      const double theta = total_phase(u, v);
      double sum = 0.0;
      int used = 0;
      for (int k = 0; k < kCell; ++k) {
        const double c = std::cos(theta + k * kHalfPi);
        if (std::fabs(c) <= kDivisionCosineEps) continue;
        sum += stack.frames[k](u, v) / (params.a + params.b * c);
        ++used;
      }
      if (used > 0) {
        out.reflectivity(u, v) = sum / used;
        out.mask.at(u, v) = 255;
      } else {
        out.reflectivity(u, v) = 0.0;
        out.mask.at(u, v) = 0;
      }
    }
  }
  return out;
}

ColorBytes merge_color(const FloatMap& r, const FloatMap& g,
                       const FloatMap& b) {
  if (!r.same_shape(g) || !r.same_shape(b)) {
    throw std::invalid_argument("merge_color: dimensions must match");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const FloatMap* m : {&r, &g, &b}) {
    for (double v : m->values()) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("merge_color: values must be finite");
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi - lo;
  ColorBytes out;
  ByteImage* dst[3] = {&out.r, &out.g, &out.b};
  const FloatMap* src[3] = {&r, &g, &b};
  for (int ch = 0; ch < 3; ++ch) {
    if (span <= 0.0) {
      *dst[ch] = ByteImage(r.height(), r.width());
      continue;
    }
    FloatMap scaled(r.height(), r.width());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      scaled.values()[i] = (src[ch]->values()[i] - lo) * (255.0 / span);
    }
    *dst[ch] = quantize_u8(scaled);
  }
  return out;
}

}  // namespace fringebrush
