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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fringebrush/error.hpp"
#include "fringebrush/io.hpp"
#include "fringebrush/metrics.hpp"
#include "fringebrush/phase.hpp"
#include "fringebrush/pipeline.hpp"

namespace fb = fringebrush;
namespace fs = std::filesystem;

namespace {

// All flags live on the root application so that a flat key=value config
// file can seed any of them; subcommands use fallthrough, so flags may be
// written before or after the subcommand name.
struct CliState {
  fb::PipelineConfig cfg;
  double noise_var = 0.0;
  double noise_rel = 0.0;
  CLI::Option* noise_var_opt = nullptr;
  CLI::Option* noise_rel_opt = nullptr;
  std::vector<std::string> sweep_modes{"col"};
  std::vector<double> sweep_ratios{1.0};
  std::vector<double> sweep_variances{0.0};
  std::vector<std::uint64_t> sweep_seeds{0};
  bool sweep_relative = false;
  std::string stage = "";  // subcommand being executed, for diagnostics
  int exit_code = 0;
};

std::string artifact(const fb::PipelineConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

void add_options(CLI::App& app, CliState& st) {
  const std::map<std::string, fb::Mode> modes{{"col", fb::Mode::kCol},
                                              {"row", fb::Mode::kRow}};
  const std::map<std::string, fb::Carrier> carriers{
      {"cell", fb::Carrier::kCellConstant}, {"pixel", fb::Carrier::kPerPixel}};
  const std::map<std::string, fb::Ordering> orderings{
      {"natural", fb::Ordering::kNatural},
      {"cake", fb::Ordering::kCakeCutting}};
  const std::map<std::string, fb::SolverMethod> methods{
      {"hadamard", fb::SolverMethod::kHadamardInverse},
      {"tv", fb::SolverMethod::kTv}};

  app.add_option("--mode", st.cfg.mode,
                 "axis the camera scans: col (columns stretched fourfold) "
                 "or row")
      ->transform(CLI::CheckedTransformer(modes))
      ->default_str("col");
  app.add_option("--variant", st.cfg.variant,
                 "arrangement matrix variant (cyclic shift), 0..3")
      ->check(CLI::Range(0, 3));
  app.add_option("--fu", st.cfg.params.f_u,
                 "fringe frequency along the column index, cycles per pixel")
      ->capture_default_str();
  app.add_option("--fv", st.cfg.params.f_v,
                 "fringe frequency along the row index, cycles per pixel")
      ->capture_default_str();
  app.add_option("--phi0", st.cfg.params.phi0,
                 "fringe phase offset in radians")
      ->capture_default_str();
  app.add_option("--a", st.cfg.params.a, "fringe background intensity")
      ->capture_default_str();
  app.add_option("--b", st.cfg.params.b, "fringe modulation amplitude")
      ->capture_default_str();
  app.add_option("--carrier", st.cfg.params.carrier,
                 "carrier evaluation: cell (constant within each 4-pixel "
                 "cell; exact four-step extraction) or pixel")
      ->transform(CLI::CheckedTransformer(carriers))
      ->default_str("cell");
  app.add_option("--ratio", st.cfg.ratio,
                 "sampling ratio M/N of the sensing basis, in (0, 1]")
      ->capture_default_str();
  app.add_option("--ordering", st.cfg.ordering,
                 "sensing basis row order: natural or cake (ascending "
                 "block count, best rows first)")
      ->transform(CLI::CheckedTransformer(orderings))
      ->default_str("natural");
  app.add_option("--method", st.cfg.solver.method,
                 "reconstruction method: hadamard (fast exact inverse, "
                 "needs ratio 1.0) or tv (total-variation solver)")
      ->transform(CLI::CheckedTransformer(methods))
      ->default_str("hadamard");
  app.add_option("--mu", st.cfg.solver.mu, "tv solver data-fidelity weight")
      ->capture_default_str();
  app.add_option("--tolerance", st.cfg.solver.tolerance,
                 "tv solver relative-change stopping tolerance")
      ->capture_default_str();
  app.add_option("--max-iterations", st.cfg.solver.max_iterations,
                 "tv solver iteration cap")
      ->capture_default_str();
  st.noise_var_opt =
      app.add_option("--noise-var", st.noise_var,
                     "absolute Gaussian measurement noise variance");
  st.noise_rel_opt = app.add_option(
      "--noise-rel", st.noise_rel,
      "measurement noise variance as a fraction of the clean "
      "measurement-value variance");
  st.noise_var_opt->excludes(st.noise_rel_opt);
  st.noise_rel_opt->excludes(st.noise_var_opt);
  app.add_option("--seed", st.cfg.noise.seed, "measurement noise seed")
      ->capture_default_str();
  app.add_option("--gen", st.cfg.generator,
                 "built-in scene: gaussian-bump, ramp, steps, checkerboard")
      ->capture_default_str();
  app.add_option("--height", st.cfg.height, "scene height in pixels")
      ->capture_default_str();
  app.add_option("--width", st.cfg.width, "scene width in pixels")
      ->capture_default_str();
  app.add_option("--scene-seed", st.cfg.scene_seed, "scene generator seed")
      ->capture_default_str();
  app.add_option("--scene", st.cfg.reflectivity_path,
                 "reflectivity image file (PGM, PPM, or FMAP); overrides "
                 "--gen");
  app.add_option("--phase", st.cfg.phase_path,
                 "scene phase map file (FMAP, radians in [0, 2*pi)); "
                 "required with --scene");
  app.add_option("--channels", st.cfg.channels,
                 "1 for gray, 3 for color (gray scenes are replicated)")
      ->check(CLI::IsMember({1, 3}))
      ->capture_default_str();
  app.add_option("--out", st.cfg.out_dir, "output directory");
  app.add_option("--workers", st.cfg.workers,
                 "worker threads (never changes any output value)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.add_flag("--strict", st.cfg.strict,
               "treat solver non-convergence as an error (exit code 4)");
  app.add_option("--modes", st.sweep_modes,
                 "sweep only: grid of scan modes (comma-separated)")
      ->delimiter(',');
  app.add_option("--ratios", st.sweep_ratios,
                 "sweep only: grid of sampling ratios")
      ->delimiter(',');
  app.add_option("--variances", st.sweep_variances,
                 "sweep only: grid of noise variances")
      ->delimiter(',');
  app.add_option("--seeds", st.sweep_seeds,
                 "sweep only: grid of noise seeds")
      ->delimiter(',');
  app.add_flag("--relative", st.sweep_relative,
               "sweep only: read --variances as fractions of the clean "
               "measurement-value variance");
  app.set_config("--config", "",
                 "key=value file supplying defaults for any flag (explicit "
                 "flags win); every run writes a compatible config.txt");
}

// Applies whichever noise flag was seen (command line or config file).
void resolve_noise(CliState& st) {
  if (st.noise_rel_opt->count() > 0) {
    st.cfg.noise.kind = fb::NoiseKind::kRelative;
    st.cfg.noise.variance = st.noise_rel;
  } else if (st.noise_var_opt->count() > 0) {
    st.cfg.noise.kind = fb::NoiseKind::kAbsolute;
    st.cfg.noise.variance = st.noise_var;
  }
}

void require_out_dir(const CliState& st) {
  if (st.cfg.out_dir.empty()) {
    throw std::invalid_argument("--out is required");
  }
}

void run_patterns(const CliState& st) {
  const fb::PipelineConfig& cfg = st.cfg;
  fs::create_directories(cfg.out_dir);
  const fb::ArrangementMatrix arr(cfg.variant);
  const int sh = cfg.mode == fb::Mode::kCol ? cfg.height : 4 * cfg.height;
  const int sw = cfg.mode == fb::Mode::kCol ? 4 * cfg.width : cfg.width;
  const fb::FloatMap fringe =
      fb::jigsaw_fringe(sh, sw, cfg.params, arr, cfg.mode);
  fb::write_fmap(artifact(cfg, "fringe.fmap"), fringe);
  fb::write_pgm(artifact(cfg, "fringe_preview.pgm"),
                fb::quantize_u8(fb::normalize_u8(fringe)));
  fb::write_hmat(artifact(cfg, "basis.hmat"), fb::sensing_basis_for(cfg, sh));
}

void run_sweep_command(CliState& st) {
  const fb::PipelineConfig& cfg = st.cfg;
  fb::Scene scene;
  if (!cfg.reflectivity_path.empty()) {
    if (cfg.phase_path.empty()) {
      throw std::invalid_argument("sweep: --scene needs --phase");
    }
    scene = fb::load_scene(cfg.reflectivity_path, cfg.phase_path);
  } else {
    scene = fb::synthesize_scene(cfg.generator, cfg.height, cfg.width,
                                 cfg.scene_seed);
  }
  fb::SweepConfig sweep;
  sweep.params = cfg.params;
  sweep.variant = cfg.variant;
  sweep.ordering = cfg.ordering;
  sweep.solver = cfg.solver;
  sweep.modes.clear();
  for (const std::string& name : st.sweep_modes) {
    if (name == "col") {
      sweep.modes.push_back(fb::Mode::kCol);
    } else if (name == "row") {
      sweep.modes.push_back(fb::Mode::kRow);
    } else {
      throw std::invalid_argument("sweep: unknown mode \"" + name +
                                  "\" (expected col or row)");
    }
  }
  sweep.ratios = st.sweep_ratios;
  sweep.variances = st.sweep_variances;
  sweep.noise_kind = st.sweep_relative ? fb::NoiseKind::kRelative
                                       : fb::NoiseKind::kAbsolute;
  sweep.seeds = st.sweep_seeds;
  sweep.workers = cfg.workers;
  const std::vector<fb::PsnrReport> reports = fb::run_sweep(scene, sweep);
  fs::create_directories(cfg.out_dir);
  fb::write_psnr_csv(artifact(cfg, "report.csv"), reports);
}

void note_unconverged(CliState& st, int unconverged) {
  if (unconverged > 0) {
    std::cerr << "fringebrush " << st.stage << ": " << unconverged
              << " column(s) stopped at the iteration cap\n";
    if (st.cfg.strict) {
      st.exit_code = 4;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Desk-scale simulator and reconstructor for single-frame fringe "
      "profilometry with column- or row-interleaved phase shifts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fringebrush 0.1.0");

  CliState st;
  add_options(app, st);

  struct Command {
    const char* name;
    const char* help;
    void (*run)(CliState&);
  };
  const Command commands[] = {
      {"patterns",
       "Write the interleaved fringe, its preview, and the sensing basis",
       [](CliState& s) {
         require_out_dir(s);
         run_patterns(s);
       }},
      {"simulate",
       "Synthesize or load a scene and measure its modulated mosaic",
       [](CliState& s) { fb::stage_simulate(s.cfg); }},
      {"reconstruct", "Rebuild the mosaic from stored measurements",
       [](CliState& s) { note_unconverged(s, fb::stage_reconstruct(s.cfg)); }},
      {"phase",
       "Split the rebuilt mosaic into phase-shift frames and recover phase "
       "and reflectivity",
       [](CliState& s) { fb::stage_phase(s.cfg); }},
      {"metrics",
       "Score recovered maps against the stored scene (report.csv)",
       [](CliState& s) { fb::stage_metrics(s.cfg); }},
      {"sweep",
       "Run a (mode, ratio, variance, seed) grid and write one CSV of PSNR "
       "rows",
       [](CliState& s) {
         require_out_dir(s);
         run_sweep_command(s);
       }},
      {"pipeline",
       "All stages in order: simulate, reconstruct, phase, metrics",
       [](CliState& s) {
         const fb::PipelineResult result = s.cfg.channels == 3
                                               ? fb::run_color_pipeline(s.cfg)
                                               : fb::run_pipeline(s.cfg);
         note_unconverged(s, result.unconverged_columns);
       }}};

  for (const Command& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    sub->fallthrough();
    auto run = command.run;
    sub->callback([&st, sub, run] {
      st.stage = sub->get_name();
      resolve_noise(st);
      run(st);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const fb::IoError& e) {
    std::cerr << "fringebrush " << st.stage << ": data error: " << e.what()
              << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fringebrush " << st.stage << ": config error: " << e.what()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fringebrush " << st.stage << ": error: " << e.what() << "\n";
    return 3;
  }
  return st.exit_code;
}
