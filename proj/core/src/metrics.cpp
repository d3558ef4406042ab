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

#include "fringebrush/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "fringebrush/error.hpp"
#include "fringebrush/phase.hpp"

namespace fringebrush {

namespace {

constexpr double kPeak = 255.0;
// MSE this far below one 8-bit code step squared is rounding residue of an
// exact recovery, not signal; it snaps to zero so exactness reports as an
// infinite PSNR.
constexpr double kMseZeroSnap = 1e-12;

int subject_rank(const std::string& subject) {
  return subject == "reflectivity" ? 0 : 1;
}

bool report_order(const PsnrReport& a, const PsnrReport& b) {
  return std::make_tuple(a.mode, a.ratio, a.noise_variance, a.seed,
                         subject_rank(a.subject), a.method) <
         std::make_tuple(b.mode, b.ratio, b.noise_variance, b.seed,
                         subject_rank(b.subject), b.method);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

PsnrReport psnr_common(const FloatMap& reference, const FloatMap& test,
                       const ByteImage* valid) {
  if (!reference.same_shape(test)) {
    throw std::invalid_argument("psnr: dimensions must match");
  }
  if (valid != nullptr && (valid->height != reference.height() ||
                           valid->width != reference.width())) {
    throw std::invalid_argument("psnr: mask dimensions must match");
  }
  PsnrReport report;
  report.p = reference.height();
  report.q = reference.width();
  double sum = 0.0;
  long counted = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (valid != nullptr && valid->pixels[i] == 0) continue;
    const double d = reference.values()[i] - test.values()[i];
    sum += d * d;
    ++counted;
  }
  report.masked_pixels =
      static_cast<long>(reference.size()) - counted;
  double mse = counted > 0 ? sum / static_cast<double>(counted) : 0.0;
  if (mse < kMseZeroSnap) mse = 0.0;
  report.mse = mse;
  if (mse == 0.0) {
    report.infinite = true;
    report.psnr_db = std::numeric_limits<double>::infinity();
  } else {
    report.psnr_db = 10.0 * std::log10(kPeak * kPeak / mse);
  }
  return report;
}

FloatMap scale_by(const FloatMap& map, double factor) {
  FloatMap out(map.height(), map.width());
  for (std::size_t i = 0; i < map.size(); ++i) {
    out.values()[i] = map.values()[i] * factor;
  }
  return out;
}

double value_variance(const MeasurementSet& ms) {
  double mean = 0.0;
  long n = 0;
  for (const auto& column : ms.columns) {
    for (double v : column) {
      mean += v;
      ++n;
    }
  }
  if (n == 0) return 0.0;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const auto& column : ms.columns) {
    for (double v : column) var += (v - mean) * (v - mean);
  }
  return var / static_cast<double>(n);
}

SensingBasis sweep_basis(int n, Ordering ordering, double ratio) {
  SensingBasis basis = hadamard_matrix(n);
  if (ordering == Ordering::kCakeCutting) basis = cake_cutting(basis);
  return truncate_basis(basis, ratio);
}

}  // namespace

FloatMap normalize_u8(const FloatMap& map) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : map.values()) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("normalize_u8: values must be finite");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  FloatMap out(map.height(), map.width());
  if (!(hi > lo)) return out;  // constant (or empty) map -> all zeros
  const double scale = kPeak / (hi - lo);
  for (std::size_t i = 0; i < map.size(); ++i) {
    out.values()[i] = (map.values()[i] - lo) * scale;
  }
  return out;
}

PsnrReport psnr(const FloatMap& reference, const FloatMap& test) {
  return psnr_common(reference, test, nullptr);
}

PsnrReport psnr_masked(const FloatMap& reference, const FloatMap& test,
                       const ByteImage& valid) {
  return psnr_common(reference, test, &valid);
}

std::string psnr_csv(std::vector<PsnrReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), report_order);
  std::string csv =
      "mode,method,ratio,noise_variance,seed,subject,mse,psnr_db,"
      "masked_pixels\n";
  for (const PsnrReport& r : reports) {
    char line[320];
    std::snprintf(line, sizeof(line), "%s,%s,%s,%s,%llu,%s,%s,%s,%ld\n",
                  r.mode.c_str(), r.method.c_str(),
                  format_real(r.ratio).c_str(),
                  format_real(r.noise_variance).c_str(),
                  static_cast<unsigned long long>(r.seed), r.subject.c_str(),
                  format_real(r.mse).c_str(),
                  r.infinite ? "inf" : format_real(r.psnr_db).c_str(),
                  r.masked_pixels);
    csv += line;
  }
  return csv;
}

void write_psnr_csv(const std::string& path,
                    const std::vector<PsnrReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const std::string csv = psnr_csv(reports);
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::vector<PsnrReport> run_sweep(const Scene& scene, const SweepConfig& cfg) {
  if (scene.channels() < 1) {
    throw std::invalid_argument("run_sweep: scene has no reflectivity");
  }
  if (cfg.modes.empty() || cfg.ratios.empty() || cfg.variances.empty() ||
      cfg.seeds.empty()) {
    throw std::invalid_argument("run_sweep: empty grid axis");
  }
  for (double v : cfg.variances) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("run_sweep: variances must be >= 0");
    }
  }
  if (cfg.solver.method == SolverMethod::kHadamardInverse) {
    for (double r : cfg.ratios) {
      if (r != 1.0) {
        throw std::invalid_argument(
            "run_sweep: the hadamard method needs full sampling (ratio 1); "
            "use the tv method for sub-sampling");
      }
    }
  }
  const char* method_name =
      cfg.solver.method == SolverMethod::kHadamardInverse ? "hadamard" : "tv";
  const ArrangementMatrix arr(cfg.variant);
  const double phase_scale = kPeak / kTwoPi;
  const FloatMap truth_reflectivity_u8 = normalize_u8(scene.reflectivity[0]);
  const FloatMap truth_phase_u8 = scale_by(scene.phase, phase_scale);

  // One noise gauge for the whole grid, so a relative fraction means the
  // same absolute noise power in every cell.
  double gauge = 0.0;
  if (cfg.noise_kind == NoiseKind::kRelative) {
    Scene stretched = stretch_scene(scene, Mode::kCol);
    FloatMap mosaic = modulate_channel(stretched.reflectivity[0],
                                       stretched.phase, cfg.params, arr,
                                       Mode::kCol);
    SensingBasis full = hadamard_matrix(mosaic.height());
    gauge = value_variance(
        measure_columns(mosaic, full, Mode::kCol, NoiseConfig{}, cfg.workers));
  }

  std::vector<PsnrReport> reports;
  for (Mode mode : cfg.modes) {
    Scene stretched = stretch_scene(scene, mode);
    FloatMap mosaic = modulate_channel(stretched.reflectivity[0],
                                       stretched.phase, cfg.params, arr, mode);
    ReferenceMaps reference = reference_phase_maps(
        cfg.params, arr, mode, scene.height(), scene.width());
    const int n = mosaic.height();
    for (double ratio : cfg.ratios) {
      const SensingBasis basis = sweep_basis(n, cfg.ordering, ratio);
      for (double variance : cfg.variances) {
        for (std::uint64_t seed : cfg.seeds) {
          NoiseConfig noise;
          noise.kind = NoiseKind::kAbsolute;
          noise.variance = cfg.noise_kind == NoiseKind::kRelative
                               ? variance * gauge
                               : variance;
          noise.seed = seed;
          const MeasurementSet ms =
              measure_columns(mosaic, basis, mode, noise, cfg.workers);
          const ReconstructResult rec =
              reconstruct_image(ms, basis, cfg.solver, cfg.workers);
          const PhaseStack stack = deinterleave(rec.image, arr, mode);
          const WrappedPhase wrapped = wrapped_phase(stack);
          const FloatMap unwrapped = unwrap_2d(wrapped.phase, wrapped.mask);
          const FloatMap phi = phase_difference(unwrapped, reference.unwrapped);
          const FloatMap reflectivity = recover_reflectivity(stack, cfg.params);

          ByteImage usable = wrapped.mask;
          for (std::size_t i = 0; i < usable.pixels.size(); ++i) {
            if (reference.mask.pixels[i] == 0) usable.pixels[i] = 0;
          }

          PsnrReport base;
          base.mode = mode == Mode::kCol ? "col" : "row";
          base.method = method_name;
          base.ratio = ratio;
          base.noise_variance = variance;
          base.seed = seed;

          PsnrReport r = psnr_masked(truth_reflectivity_u8,
                                     normalize_u8(reflectivity), usable);
          r.mode = base.mode;
          r.method = base.method;
          r.ratio = base.ratio;
          r.noise_variance = base.noise_variance;
          r.seed = base.seed;
          r.subject = "reflectivity";
          reports.push_back(r);

          PsnrReport ph = psnr_masked(truth_phase_u8,
                                      scale_by(phi, phase_scale), usable);
          ph.mode = base.mode;
          ph.method = base.method;
          ph.ratio = base.ratio;
          ph.noise_variance = base.noise_variance;
          ph.seed = base.seed;
          ph.subject = "phase";
          reports.push_back(ph);
        }
      }
    }
  }
  std::stable_sort(reports.begin(), reports.end(), report_order);
  return reports;
}

}  // namespace fringebrush
