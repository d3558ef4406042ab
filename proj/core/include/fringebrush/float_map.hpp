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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fringebrush {

// Row-major 2-D grid of real values.  Row index u counts down from the top,
// column index v counts right from the left; (0, 0) is the top-left pixel.
class FloatMap {
 public:
  FloatMap() = default;
  FloatMap(int height, int width, double fill = 0.0)
      : height_(height), width_(width) {
    if (height < 1 || width < 1) {
      throw std::invalid_argument("FloatMap: dimensions must be >= 1");
    }
    values_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator()(int u, int v) const { return values_[index(u, v)]; }
  double& operator()(int u, int v) { return values_[index(u, v)]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool same_shape(const FloatMap& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  double min_value() const {
    return *std::min_element(values_.begin(), values_.end());
  }
  double max_value() const {
    return *std::max_element(values_.begin(), values_.end());
  }
  double abs_max() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, x < 0 ? -x : x);
    return m;
  }

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * width_ + v;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

// Per-pixel validity mask.  A zero entry marks a pixel whose value could not
// be determined (for example a degenerate phase sample); consumers skip such
// pixels instead of propagating garbage.
struct Mask {
  Mask() = default;
  Mask(int height, int width, std::uint8_t fill = 1)
      : height(height), width(width) {
    if (height < 1 || width < 1) {
      throw std::invalid_argument("Mask: dimensions must be >= 1");
    }
    valid.assign(static_cast<std::size_t>(height) * width, fill);
  }

  bool at(int u, int v) const {
    return valid[static_cast<std::size_t>(u) * width + v] != 0;
  }
  void set(int u, int v, bool ok) {
    valid[static_cast<std::size_t>(u) * width + v] = ok ? 1 : 0;
  }
  std::size_t count_masked() const {
    std::size_t n = 0;
    for (auto b : valid) n += (b == 0);
    return n;
  }

  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> valid;
};

}  // namespace fringebrush
