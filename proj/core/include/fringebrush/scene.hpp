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

#include "fringebrush/float_map.hpp"
#include "fringebrush/fringe.hpp"

namespace fringebrush {

// A surface under test: per-channel reflectivity in [0, 1] (one gray channel
// or three RGB channels) and a single phase map in [0, 2*pi) radians shared
// by all channels.
struct Scene {
  std::vector<FloatMap> reflectivity;
  FloatMap phase;

  int channels() const { return static_cast<int>(reflectivity.size()); }
  int height() const { return phase.height(); }
  int width() const { return phase.width(); }
};

// Built-in deterministic test surfaces.  `generator` is one of
// "gaussian-bump", "ramp", "steps", "checkerboard"; dimensions must be at
// least 8.  All generators are closed-form, so the seed only participates in
// the signature for uniformity with the noisy stages.
Scene synthesize_scene(const std::string& generator, int height, int width,
                       std::uint64_t seed);

// Loads reflectivity from a PGM (gray), PPM (color), or FMAP file and phase
// from an FMAP file.  8-bit reflectivity is rescaled to [0, 1]; FMAP
// reflectivity is taken as stored.  Phase values must lie in [0, 2*pi).
Scene load_scene(const std::string& reflectivity_path,
                 const std::string& phase_path);

// Replicates pixels fourfold along the axis the mode scans: columns for
// mode=col (H x 4W), rows for mode=row (4H x W).
Scene stretch_scene(const Scene& scene, Mode mode);
FloatMap stretch_map(const FloatMap& map, Mode mode);

// Radiance seen by the camera: R * a + R * b * cos(carrier + phi0 + phase +
// shift), with the shift index owned by the arrangement cell.  Inputs are one
// channel of an already-stretched scene.
FloatMap modulate_channel(const FloatMap& reflectivity, const FloatMap& phase,
                          const FringeParams& params,
                          const ArrangementMatrix& arr, Mode mode);

// All channels against the shared phase map.
std::vector<FloatMap> modulate_scene(const Scene& stretched,
                                     const FringeParams& params,
                                     const ArrangementMatrix& arr, Mode mode);

}  // namespace fringebrush
