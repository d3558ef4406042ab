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

#include "fringebrush/measurement.hpp"
#include "fringebrush/reconstruct.hpp"
#include "fringebrush/scene.hpp"

namespace fringebrush {

// Everything one end-to-end run depends on.  The whole output tree is a pure
// function of this struct, so identical configs give byte-identical trees
// for any worker count.
struct PipelineConfig {
  Mode mode = Mode::kCol;
  int variant = 0;
  FringeParams params;

  double ratio = 1.0;
  Ordering ordering = Ordering::kNatural;
  SolverConfig solver;
  NoiseConfig noise;

  // Scene source: file paths win when set, otherwise `generator` at
  // height x width.
  std::string generator = "gaussian-bump";
  int height = 64;
  int width = 64;
  std::uint64_t scene_seed = 0;
  std::string reflectivity_path;
  std::string phase_path;

  int channels = 1;  // 1 for gray, 3 replicates gray scenes / keeps color
  std::string out_dir;
  int workers = 1;
  bool strict = false;  // callers treat unconverged columns as failure
};

struct PipelineResult {
  int unconverged_columns = 0;
};

// Stage entry points.  Every stage works against files under cfg.out_dir so
// any stage can rerun from the previous stage's outputs alone; running the
// stages one by one with the same config reproduces run_pipeline's tree
// byte for byte.  Each stage (re)writes config.txt, an echo of the
// result-defining part of the config (out_dir, workers and strict never
// change any output value, so they are left out and the tree stays
// byte-identical across directories and worker counts) readable back through
// the command-line config-file option.
//
// simulate: scene_reflectivity*.fmap, scene_phase.fmap, f_true*.fmap,
//           basis.hmat, measurements*.mset
void stage_simulate(const PipelineConfig& cfg);
// reconstruct: f_hat*.fmap from basis.hmat + measurements*.mset; returns the
// number of columns that hit the solver's iteration cap.
int stage_reconstruct(const PipelineConfig& cfg);
// phase: stack_*.fmap, wrapped/unwrapped/ref_*.fmap, phi.fmap,
//        reflectivity*.fmap, mask.pgm, phi_mesh.obj and previews (color runs
//        write color.ppm) from f_hat*.fmap.
void stage_phase(const PipelineConfig& cfg);
// metrics: report.csv comparing the recovered maps against the stored scene.
void stage_metrics(const PipelineConfig& cfg);

// All stages in order.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Three independent gray runs on the R, G, B reflectivities with one shared
// phase chain (channel 0 drives it) and a merged color preview.  Requires
// cfg.channels == 3; gray scenes are replicated across the channels.
PipelineResult run_color_pipeline(const PipelineConfig& cfg);

// The config.txt text for this config (also what the stages write).
std::string config_echo(const PipelineConfig& cfg);

// The sensing basis a run with this config applies to its mosaic columns:
// the order-N matrix in the configured row order, truncated to the sampling
// ratio.  `sensing_length` is the stretched mosaic height.
SensingBasis sensing_basis_for(const PipelineConfig& cfg, int sensing_length);

}  // namespace fringebrush
