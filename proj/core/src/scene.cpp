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

#include "fringebrush/scene.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fringebrush/io.hpp"

namespace fringebrush {
namespace {

constexpr int kMinSceneDim = 8;

// Finite-difference gradient magnitude: central differences inside, one-sided
// at the borders.
FloatMap gradient_magnitude(const FloatMap& f) {
  const int h = f.height();
  const int w = f.width();
  FloatMap g(h, w);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      double du;
      if (u == 0) {
        du = f(1, v) - f(0, v);
      } else if (u == h - 1) {
        du = f(h - 1, v) - f(h - 2, v);
      } else {
        du = (f(u + 1, v) - f(u - 1, v)) / 2.0;
      }
      double dv;
      if (v == 0) {
        dv = f(u, 1) - f(u, 0);
      } else if (v == w - 1) {
        dv = f(u, w - 1) - f(u, w - 2);
      } else {
        dv = (f(u, v + 1) - f(u, v - 1)) / 2.0;
      }
      g(u, v) = std::hypot(du, dv);
    }
  }
  return g;
}

// Reflectivity from phase relief: flat regions stay bright, steep regions
// darken, always within [0.25, 0.75].
FloatMap reflectivity_from_gradient(const FloatMap& phase) {
  FloatMap g = gradient_magnitude(phase);
  const double peak = g.max_value();
  FloatMap r(phase.height(), phase.width());
  for (int u = 0; u < phase.height(); ++u) {
    for (int v = 0; v < phase.width(); ++v) {
      const double hat = peak > 0.0 ? g(u, v) / peak : 0.0;
      r(u, v) = 0.25 + 0.5 * (1.0 - hat);
    }
  }
  return r;
}

FloatMap bump_phase(int h, int w) {
  FloatMap phase(h, w);
  const double sigma = std::min(h, w) / 6.0;
  const int cu = h / 2;
  const int cv = w / 2;
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      const double d2 = static_cast<double>(u - cu) * (u - cu) +
                        static_cast<double>(v - cv) * (v - cv);
      phase(u, v) = 0.9 * kTwoPi * std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return phase;
}

}  // namespace

Scene synthesize_scene(const std::string& generator, int height, int width,
                       std::uint64_t seed) {
  (void)seed;  // every generator is closed-form
  if (height < kMinSceneDim || width < kMinSceneDim) {
    throw std::invalid_argument("synthesize_scene: dimensions must be >= 8");
  }
  Scene scene;
  if (generator == "gaussian-bump") {
    scene.phase = bump_phase(height, width);
    scene.reflectivity.push_back(reflectivity_from_gradient(scene.phase));
  } else if (generator == "ramp") {
    FloatMap phase(height, width);
    for (int u = 0; u < height; ++u) {
      const double value = 0.9 * kTwoPi * u / (height - 1);
      for (int v = 0; v < width; ++v) phase(u, v) = value;
    }
    scene.phase = phase;
    scene.reflectivity.push_back(reflectivity_from_gradient(scene.phase));
  } else if (generator == "steps") {
    FloatMap phase(height, width);
    for (int u = 0; u < height; ++u) {
      const int band = (4 * u) / height;  // 0..3
      const double value = band * kHalfPi;
      for (int v = 0; v < width; ++v) phase(u, v) = value;
    }
    scene.phase = phase;
    scene.reflectivity.push_back(reflectivity_from_gradient(scene.phase));
  } else if (generator == "checkerboard") {
    scene.phase = bump_phase(height, width);
    FloatMap r(height, width);
    for (int u = 0; u < height; ++u) {
      for (int v = 0; v < width; ++v) {
        r(u, v) = ((u / 8 + v / 8) % 2 == 0) ? 0.2 : 0.8;
      }
    }
    scene.reflectivity.push_back(std::move(r));
  } else {
    throw std::invalid_argument("synthesize_scene: unknown generator \"" +
                                generator + "\"");
  }
  return scene;
}

Scene load_scene(const std::string& reflectivity_path,
                 const std::string& phase_path) {
  Scene scene;

  // Reflectivity container is identified by its leading bytes.
  {
    std::ifstream probe(reflectivity_path, std::ios::binary);
    if (!probe) throw IoError("cannot open: " + reflectivity_path);
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P' && magic[1] == '5') {
      ByteImage img = read_pgm(reflectivity_path);
      FloatMap r(img.height, img.width);
      for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        r.values()[i] = img.pixels[i] / 255.0;
      }
      scene.reflectivity.push_back(std::move(r));
    } else if (magic[0] == 'P' && magic[1] == '6') {
      auto rgb = read_ppm(reflectivity_path);
      for (const ByteImage& img : rgb) {
        FloatMap r(img.height, img.width);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
          r.values()[i] = img.pixels[i] / 255.0;
        }
        scene.reflectivity.push_back(std::move(r));
      }
    } else {
      scene.reflectivity.push_back(read_fmap(reflectivity_path));
    }
  }

  scene.phase = read_fmap(phase_path);
  for (double v : scene.phase.values()) {
    if (!(v >= 0.0) || !(v < kTwoPi)) {
      throw std::invalid_argument(
          "load_scene: phase values must lie in [0, 2*pi)");
    }
  }
  for (const FloatMap& r : scene.reflectivity) {
    if (!r.same_shape(scene.phase)) {
      throw std::invalid_argument(
          "load_scene: reflectivity and phase dimensions differ");
    }
  }
  if (scene.height() < kMinSceneDim || scene.width() < kMinSceneDim) {
    throw std::invalid_argument("load_scene: dimensions must be >= 8");
  }
  return scene;
}

FloatMap stretch_map(const FloatMap& map, Mode mode) {
  const int h = map.height();
  const int w = map.width();
  const int cell = ArrangementMatrix::kCell;
  if (mode == Mode::kCol) {
    FloatMap out(h, w * cell);
    for (int u = 0; u < h; ++u) {
      for (int v = 0; v < w * cell; ++v) out(u, v) = map(u, v / cell);
    }
    return out;
  }
  FloatMap out(h * cell, w);
  for (int u = 0; u < h * cell; ++u) {
    for (int v = 0; v < w; ++v) out(u, v) = map(u / cell, v);
  }
  return out;
}

Scene stretch_scene(const Scene& scene, Mode mode) {
  Scene out;
  for (const FloatMap& r : scene.reflectivity) {
    out.reflectivity.push_back(stretch_map(r, mode));
  }
  out.phase = stretch_map(scene.phase, mode);
  return out;
}

FloatMap modulate_channel(const FloatMap& reflectivity, const FloatMap& phase,
                          const FringeParams& params,
                          const ArrangementMatrix& arr, Mode mode) {
  if (!reflectivity.same_shape(phase)) {
    throw std::invalid_argument(
        "modulate_channel: reflectivity and phase dimensions differ");
  }
  const int h = reflectivity.height();
  const int w = reflectivity.width();
  if (h < ArrangementMatrix::kCell || w < ArrangementMatrix::kCell) {
    throw std::invalid_argument("modulate_channel: dimensions must be >= 4");
  }
  FloatMap out(h, w);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      const CarrierCoords cc = carrier_coords(params, mode, u, v);
      const double arg = fringe_argument(params, cc.u, cc.v,
                                         arr.index_at(u, v), phase(u, v));
      const double r = reflectivity(u, v);
      // Keep the DC term as its own product: the same R*a value then appears
      // in every shift of a cell and cancels exactly in the shift
      // differences downstream.
      out(u, v) = r * params.a + r * (params.b * std::cos(arg));
    }
  }
  return out;
}

std::vector<FloatMap> modulate_scene(const Scene& stretched,
                                     const FringeParams& params,
                                     const ArrangementMatrix& arr, Mode mode) {
  std::vector<FloatMap> out;
  out.reserve(stretched.reflectivity.size());
  for (const FloatMap& r : stretched.reflectivity) {
    out.push_back(modulate_channel(r, stretched.phase, params, arr, mode));
  }
  return out;
}

}  // namespace fringebrush
