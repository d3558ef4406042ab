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

#include "fringebrush/fringe.hpp"

namespace fringebrush {

FloatMap phase_shift_fringe(int height, int width, const FringeParams& params,
                            int k) {
  if (k < 0 || k > 3) {
    throw std::invalid_argument("phase_shift_fringe: k must be 0..3");
  }
  FloatMap out(height, width);
  for (int u = 0; u < height; ++u) {
    for (int v = 0; v < width; ++v) {
      out(u, v) = fringe_sample(params, u, v, k, 0.0);
    }
  }
  return out;
}

FloatMap jigsaw_fringe(int height, int width, const FringeParams& params,
                       const ArrangementMatrix& arr, Mode mode) {
  if (height < ArrangementMatrix::kCell || width < ArrangementMatrix::kCell) {
    throw std::invalid_argument("jigsaw_fringe: dimensions must be >= 4");
  }
  FloatMap out(height, width);
  for (int u = 0; u < height; ++u) {
    for (int v = 0; v < width; ++v) {
      const CarrierCoords cc = carrier_coords(params, mode, u, v);
      out(u, v) = fringe_sample(params, cc.u, cc.v, arr.index_at(u, v), 0.0);
    }
  }
  return out;
}

}  // namespace fringebrush
