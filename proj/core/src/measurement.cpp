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

#include "fringebrush/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "fringebrush/rng.hpp"

namespace fringebrush {
namespace {

// Signed dot product computed as (sum over +1 slots) - (sum over -1 slots).
// The two partial sums use exactly the same additions as the unipolar halves
// in measure_differential, which makes the zero-noise paths bit-identical.
double signed_dot(const std::int8_t* row, const double* x, int n) {
  double pos = 0.0;
  double neg = 0.0;
  for (int j = 0; j < n; ++j) {
    if (row[j] > 0) {
      pos += x[j];
    } else {
      neg += x[j];
    }
  }
  return pos - neg;
}

double unipolar_dot(const std::uint8_t* row, const double* x, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    if (row[j]) s += x[j];
  }
  return s;
}

void copy_column(const FloatMap& image, int i, std::vector<double>& buf) {
  const int h = image.height();
  for (int u = 0; u < h; ++u) buf[u] = image(u, i);
}

// Runs fn(i) for i in [0, count) over `workers` threads on disjoint static
// ranges; output slots are disjoint per i, so results match the serial order.
template <typename Fn>
void parallel_columns(int count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int n_threads = std::min(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < count; i += n_threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Population variance of all measurement values, accumulated in a fixed
// order so the result is independent of the worker count.
double population_variance(const std::vector<std::vector<double>>& columns) {
  std::size_t n = 0;
  double mean = 0.0;
  for (const auto& c : columns) n += c.size();
  if (n == 0) return 0.0;
  for (const auto& c : columns) {
    for (double v : c) mean += v;
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const auto& c : columns) {
    for (double v : c) var += (v - mean) * (v - mean);
  }
  return var / static_cast<double>(n);
}

void validate_noise(const NoiseConfig& noise) {
  if (!(noise.variance >= 0.0)) {
    throw std::invalid_argument("noise variance must be non-negative");
  }
}

double resolve_variance(const NoiseConfig& noise,
                        const std::vector<std::vector<double>>& noiseless) {
  if (noise.kind == NoiseKind::kAbsolute) return noise.variance;
  return noise.variance * population_variance(noiseless);
}

}  // namespace

MeasurementSet measure_columns(const FloatMap& image,
                               const SensingBasis& basis, Mode mode,
                               const NoiseConfig& noise, int workers) {
  if (basis.cols != image.height()) {
    throw std::invalid_argument(
        "measure_columns: basis column count must equal the image height");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  validate_noise(noise);

  const int w = image.width();
  const int m = basis.rows;
  const int n = basis.cols;

  MeasurementSet ms;
  ms.columns.assign(w, std::vector<double>(m, 0.0));
  ms.basis_rows = m;
  ms.basis_cols = n;
  ms.ordering = basis.ordering;
  ms.mode = mode;
  ms.seed = noise.seed;

  parallel_columns(w, workers, [&](int i) {
    std::vector<double> buf(n);
    copy_column(image, i, buf);
    auto& c = ms.columns[i];
    for (int r = 0; r < m; ++r) c[r] = signed_dot(basis.row(r), buf.data(), n);
  });

  const double sigma2 = resolve_variance(noise, ms.columns);
  ms.noise_variance = sigma2;
  if (sigma2 > 0.0) {
    const double sigma = std::sqrt(sigma2);
    parallel_columns(w, workers, [&](int i) {
      GaussianStream g(noise.seed, static_cast<std::uint64_t>(i));
      auto& c = ms.columns[i];
      for (int r = 0; r < m; ++r) c[r] += sigma * g.next_normal();
    });
  }
  return ms;
}

MeasurementSet measure_differential(const FloatMap& image,
                                    const BasisSplit& split, Mode mode,
                                    const NoiseConfig& noise, int workers) {
  if (split.cols != image.height()) {
    throw std::invalid_argument(
        "measure_differential: split column count must equal the image "
        "height");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  validate_noise(noise);

  const int w = image.width();
  const int m = split.rows;
  const int n = split.cols;

  MeasurementSet ms;
  ms.columns.assign(w, std::vector<double>(m, 0.0));
  ms.basis_rows = m;
  ms.basis_cols = n;
  ms.ordering = split.ordering;
  ms.mode = mode;
  ms.seed = noise.seed;

  // Noiseless differenced values first; they double as the gauge for
  // relative noise requests.
  parallel_columns(w, workers, [&](int i) {
    std::vector<double> buf(n);
    copy_column(image, i, buf);
    auto& c = ms.columns[i];
    for (int r = 0; r < m; ++r) {
      const double pos = unipolar_dot(split.positive_row(r), buf.data(), n);
      const double neg = unipolar_dot(split.negative_row(r), buf.data(), n);
      c[r] = pos - neg;
    }
  });

  const double sigma2 = resolve_variance(noise, ms.columns);
  ms.noise_variance = sigma2;
  if (sigma2 > 0.0) {
    const double sigma = std::sqrt(sigma2);
    parallel_columns(w, workers, [&](int i) {
      GaussianStream pos_stream(noise.seed, 2 * static_cast<std::uint64_t>(i));
      GaussianStream neg_stream(noise.seed,
                                2 * static_cast<std::uint64_t>(i) + 1);
      auto& c = ms.columns[i];
      for (int r = 0; r < m; ++r) {
        c[r] += sigma * pos_stream.next_normal() -
                sigma * neg_stream.next_normal();
      }
    });
  }
  return ms;
}

}  // namespace fringebrush
