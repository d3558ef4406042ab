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

#include "fringebrush/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fringebrush/error.hpp"
#include "fringebrush/io.hpp"
#include "fringebrush/metrics.hpp"
#include "fringebrush/phase.hpp"

namespace fringebrush {
namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Suffix of per-channel artifact names: none for gray, _r/_g/_b for color.
std::string channel_suffix(const PipelineConfig& cfg, int c) {
  static const char* kSuffix[3] = {"_r", "_g", "_b"};
  return cfg.channels == 3 ? kSuffix[c] : "";
}

// Shortest decimal form that parses back to exactly the same double.
std::string shortest_double(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

const char* mode_name(Mode mode) {
  return mode == Mode::kCol ? "col" : "row";
}

const char* method_name(SolverMethod method) {
  return method == SolverMethod::kHadamardInverse ? "hadamard" : "tv";
}

void validate(const PipelineConfig& cfg) {
  if (cfg.out_dir.empty()) {
    throw std::invalid_argument("pipeline: out_dir must be set");
  }
  if (cfg.channels != 1 && cfg.channels != 3) {
    throw std::invalid_argument("pipeline: channels must be 1 or 3");
  }
  if (cfg.workers < 1) {
    throw std::invalid_argument("pipeline: workers must be at least 1");
  }
  if (cfg.ratio != 1.0 &&
      cfg.solver.method == SolverMethod::kHadamardInverse) {
    throw std::invalid_argument(
        "pipeline: the fast inverse needs the complete basis (ratio 1.0)");
  }
}

// Ensures the output directory exists and (re)writes config.txt.  Every stage
// calls this, so a tree produced stage by stage carries the same files as one
// produced by run_pipeline.
void write_config(const PipelineConfig& cfg) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw IoError("pipeline: cannot create directory " + cfg.out_dir + ": " +
                  ec.message());
  }
  const std::string path = join(cfg.out_dir, "config.txt");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("pipeline: cannot open " + path + " for writing");
  }
  out << config_echo(cfg);
  out.flush();
  if (!out) {
    throw IoError("pipeline: failed writing " + path);
  }
}

// The scene the run works on, with the channel count already resolved.
Scene resolve_scene(const PipelineConfig& cfg) {
  Scene scene;
  if (!cfg.reflectivity_path.empty()) {
    if (cfg.phase_path.empty()) {
      throw std::invalid_argument(
          "pipeline: a reflectivity file needs a phase file");
    }
    scene = load_scene(cfg.reflectivity_path, cfg.phase_path);
  } else {
    scene =
        synthesize_scene(cfg.generator, cfg.height, cfg.width, cfg.scene_seed);
  }
  if (scene.channels() == 1 && cfg.channels == 3) {
    scene.reflectivity.push_back(scene.reflectivity[0]);
    scene.reflectivity.push_back(scene.reflectivity[0]);
  }
  if (scene.channels() != cfg.channels) {
    throw std::invalid_argument(
        "pipeline: scene channel count does not match the requested channels");
  }
  return scene;
}

FloatMap scale_values(const FloatMap& map, double factor) {
  FloatMap out(map.height(), map.width());
  for (std::size_t i = 0; i < map.values().size(); ++i) {
    out.values()[i] = map.values()[i] * factor;
  }
  return out;
}

}  // namespace

SensingBasis sensing_basis_for(const PipelineConfig& cfg, int sensing_length) {
  SensingBasis basis = hadamard_matrix(sensing_length);
  if (cfg.ordering == Ordering::kCakeCutting) {
    basis = cake_cutting(basis);
  } else if (cfg.ordering == Ordering::kCustom) {
    throw std::invalid_argument(
        "pipeline: only natural and cake-cutting orderings can be generated");
  }
  return truncate_basis(basis, cfg.ratio);
}

std::string config_echo(const PipelineConfig& cfg) {
  std::string text;
  auto put = [&text](const std::string& key, const std::string& value) {
    text += key;
    text += '=';
    text += value;
    text += '\n';
  };
  put("mode", mode_name(cfg.mode));
  put("variant", std::to_string(cfg.variant));
  put("fu", shortest_double(cfg.params.f_u));
  put("fv", shortest_double(cfg.params.f_v));
  put("phi0", shortest_double(cfg.params.phi0));
  put("a", shortest_double(cfg.params.a));
  put("b", shortest_double(cfg.params.b));
  put("carrier",
      cfg.params.carrier == Carrier::kCellConstant ? "cell" : "pixel");
  put("ratio", shortest_double(cfg.ratio));
  put("ordering",
      cfg.ordering == Ordering::kCakeCutting ? "cake" : "natural");
  put("method", method_name(cfg.solver.method));
  put("mu", shortest_double(cfg.solver.mu));
  put("tolerance", shortest_double(cfg.solver.tolerance));
  put("max-iterations", std::to_string(cfg.solver.max_iterations));
  if (cfg.noise.kind == NoiseKind::kRelative) {
    put("noise-rel", shortest_double(cfg.noise.variance));
  } else {
    put("noise-var", shortest_double(cfg.noise.variance));
  }
  put("seed", std::to_string(cfg.noise.seed));
  if (!cfg.reflectivity_path.empty()) {
    put("scene", cfg.reflectivity_path);
    put("phase", cfg.phase_path);
  } else {
    put("gen", cfg.generator);
    put("height", std::to_string(cfg.height));
    put("width", std::to_string(cfg.width));
    put("scene-seed", std::to_string(cfg.scene_seed));
  }
  put("channels", std::to_string(cfg.channels));
  return text;
}

void stage_simulate(const PipelineConfig& cfg) {
  write_config(cfg);
  const Scene scene = resolve_scene(cfg);
  for (int c = 0; c < scene.channels(); ++c) {
    write_fmap(join(cfg.out_dir,
                    "scene_reflectivity" + channel_suffix(cfg, c) + ".fmap"),
               scene.reflectivity[c]);
  }
  write_fmap(join(cfg.out_dir, "scene_phase.fmap"), scene.phase);

  const ArrangementMatrix arr(cfg.variant);
  const Scene stretched = stretch_scene(scene, cfg.mode);
  const std::vector<FloatMap> mosaics =
      modulate_scene(stretched, cfg.params, arr, cfg.mode);
  const SensingBasis basis = sensing_basis_for(cfg, mosaics[0].height());
  write_hmat(join(cfg.out_dir, "basis.hmat"), basis);
  for (int c = 0; c < scene.channels(); ++c) {
    const std::string s = channel_suffix(cfg, c);
    write_fmap(join(cfg.out_dir, "f_true" + s + ".fmap"), mosaics[c]);
    const MeasurementSet ms =
        measure_columns(mosaics[c], basis, cfg.mode, cfg.noise, cfg.workers);
    write_mset(join(cfg.out_dir, "measurements" + s + ".mset"), ms);
  }
}

int stage_reconstruct(const PipelineConfig& cfg) {
  write_config(cfg);
  const SensingBasis basis = read_hmat(join(cfg.out_dir, "basis.hmat"));
  int unconverged = 0;
  for (int c = 0; c < cfg.channels; ++c) {
    const std::string s = channel_suffix(cfg, c);
    const MeasurementSet ms =
        read_mset(join(cfg.out_dir, "measurements" + s + ".mset"));
    const ReconstructResult res =
        reconstruct_image(ms, basis, cfg.solver, cfg.workers);
    unconverged += res.unconverged_columns;
    write_fmap(join(cfg.out_dir, "f_hat" + s + ".fmap"), res.image);
  }
  return unconverged;
}

void stage_phase(const PipelineConfig& cfg) {
  write_config(cfg);
  const ArrangementMatrix arr(cfg.variant);
  std::vector<FloatMap> reflectivities;
  reflectivities.reserve(cfg.channels);
  for (int c = 0; c < cfg.channels; ++c) {
    const std::string s = channel_suffix(cfg, c);
    const FloatMap f_hat = read_fmap(join(cfg.out_dir, "f_hat" + s + ".fmap"));
    const PhaseStack stack = deinterleave(f_hat, arr, cfg.mode);
    for (int k = 0; k < 4; ++k) {
      write_fmap(
          join(cfg.out_dir, "stack_" + std::to_string(k) + s + ".fmap"),
          stack.frames[k]);
    }
    if (c == 0) {
      // Channel 0 owns the shared phase chain.
      const WrappedPhase wrapped = wrapped_phase(stack);
      const FloatMap unwrapped = unwrap_2d(wrapped.phase, wrapped.mask);
      const ReferenceMaps ref =
          reference_phase_maps(cfg.params, arr, cfg.mode, stack.height(),
                               stack.width(), ReferencePath::kNumeric);
      const FloatMap phi = phase_difference(unwrapped, ref.unwrapped);
      ByteImage mask = wrapped.mask;
      for (std::size_t i = 0; i < mask.pixels.size(); ++i) {
        if (ref.mask.pixels[i] == 0) {
          mask.pixels[i] = 0;
        }
      }
      write_fmap(join(cfg.out_dir, "wrapped.fmap"), wrapped.phase);
      write_fmap(join(cfg.out_dir, "unwrapped.fmap"), unwrapped);
      write_fmap(join(cfg.out_dir, "ref_wrapped.fmap"), ref.wrapped);
      write_fmap(join(cfg.out_dir, "ref_unwrapped.fmap"), ref.unwrapped);
      write_fmap(join(cfg.out_dir, "phi.fmap"), phi);
      write_pgm(join(cfg.out_dir, "mask.pgm"), mask);
      write_height_mesh(join(cfg.out_dir, "phi_mesh.obj"), phi);
      write_pgm(join(cfg.out_dir, "phi_preview.pgm"),
                quantize_u8(scale_values(phi, 255.0 / kTwoPi)));
    }
    FloatMap reflectivity = recover_reflectivity(stack, cfg.params);
    write_fmap(join(cfg.out_dir, "reflectivity" + s + ".fmap"), reflectivity);
    reflectivities.push_back(std::move(reflectivity));
  }
  if (cfg.channels == 1) {
    write_pgm(join(cfg.out_dir, "reflectivity_preview.pgm"),
              quantize_u8(normalize_u8(reflectivities[0])));
  } else {
    const ColorBytes color = merge_color(reflectivities[0], reflectivities[1],
                                         reflectivities[2]);
    write_ppm(join(cfg.out_dir, "color.ppm"), color.r, color.g, color.b);
  }
}

void stage_metrics(const PipelineConfig& cfg) {
  write_config(cfg);
  const std::string s0 = channel_suffix(cfg, 0);
  const FloatMap truth_reflectivity =
      read_fmap(join(cfg.out_dir, "scene_reflectivity" + s0 + ".fmap"));
  const FloatMap truth_phase =
      read_fmap(join(cfg.out_dir, "scene_phase.fmap"));
  const FloatMap reflectivity =
      read_fmap(join(cfg.out_dir, "reflectivity" + s0 + ".fmap"));
  const FloatMap phi = read_fmap(join(cfg.out_dir, "phi.fmap"));
  const ByteImage mask = read_pgm(join(cfg.out_dir, "mask.pgm"));

  PsnrReport reflectivity_report = psnr_masked(
      normalize_u8(truth_reflectivity), normalize_u8(reflectivity), mask);
  reflectivity_report.subject = "reflectivity";
  const double phase_scale = 255.0 / kTwoPi;
  PsnrReport phase_report =
      psnr_masked(scale_values(truth_phase, phase_scale),
                  scale_values(phi, phase_scale), mask);
  phase_report.subject = "phase";

  for (PsnrReport* report : {&reflectivity_report, &phase_report}) {
    report->mode = mode_name(cfg.mode);
    report->method = method_name(cfg.solver.method);
    report->ratio = cfg.ratio;
    report->noise_variance = cfg.noise.variance;
    report->seed = cfg.noise.seed;
  }
  write_psnr_csv(join(cfg.out_dir, "report.csv"),
                 {reflectivity_report, phase_report});
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  stage_simulate(cfg);
  PipelineResult result;
  result.unconverged_columns = stage_reconstruct(cfg);
  stage_phase(cfg);
  stage_metrics(cfg);
  return result;
}

PipelineResult run_color_pipeline(const PipelineConfig& cfg) {
  if (cfg.channels != 3) {
    throw std::invalid_argument("run_color_pipeline: channels must be 3");
  }
  return run_pipeline(cfg);
}

}  // namespace fringebrush
