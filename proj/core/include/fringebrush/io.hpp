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
#include <cstdint>
#include <string>
#include <vector>

#include "fringebrush/error.hpp"
#include "fringebrush/float_map.hpp"
#include "fringebrush/measurement.hpp"
#include "fringebrush/sensing_basis.hpp"

namespace fringebrush {

// 8-bit grayscale raster, row-major.
struct ByteImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  ByteImage() = default;
  ByteImage(int h, int w)
      : height(h),
        width(w),
        pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0) {}
  std::uint8_t& at(int u, int v) {
    return pixels[static_cast<std::size_t>(u) * width + v];
  }
  std::uint8_t at(int u, int v) const {
    return pixels[static_cast<std::size_t>(u) * width + v];
  }
};

// Rounds half away from zero and clamps to [0, 255].  Values must be finite.
ByteImage quantize_u8(const FloatMap& map);

// Byte values widened to doubles in [0, 255].
FloatMap to_float_map(const ByteImage& image);

// FMAP: magic "FMAP", u32 LE width, u32 LE height, width*height f32 LE values
// in row-major order.
void write_fmap(const std::string& path, const FloatMap& map);
FloatMap read_fmap(const std::string& path);

// HMAT: magic "HMAT", u32 LE M, u32 LE N, M*N signed 8-bit entries in
// {-1, +1}, row-major.  Reading recovers the natural row index when the rows
// belong to the Hadamard matrix and tags the ordering accordingly.
void write_hmat(const std::string& path, const SensingBasis& basis);
SensingBasis read_hmat(const std::string& path);

// MSET: magic "MSET", u32 LE column count, u32 LE M, u32 LE N, mode byte
// (0 = col, 1 = row), f64 LE noise variance (absolute), u64 LE seed, then
// the measurement columns as f64 LE.
void write_mset(const std::string& path, const MeasurementSet& ms);
MeasurementSet read_mset(const std::string& path);

// Binary PGM (P5) and PPM (P6) with maxval 255; other maxvals are rejected.
void write_pgm(const std::string& path, const ByteImage& image);
ByteImage read_pgm(const std::string& path);
void write_ppm(const std::string& path, const ByteImage& r, const ByteImage& g,
               const ByteImage& b);
std::array<ByteImage, 3> read_ppm(const std::string& path);

// ASCII mesh of the height map: one "v x y z" line per pixel in row-major
// order (x = column, y = row, z = value), then 1-indexed quad faces.
void write_height_mesh(const std::string& path, const FloatMap& height);

}  // namespace fringebrush
