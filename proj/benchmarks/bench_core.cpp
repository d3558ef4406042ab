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

// Microbenchmarks for the hot paths: basis construction, the fast transform,
// pattern synthesis, measurement, the two per-column solvers, phase
// extraction, unwrapping, and one small end-to-end run.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <vector>

#include "fringebrush/fringe.hpp"
#include "fringebrush/measurement.hpp"
#include "fringebrush/phase.hpp"
#include "fringebrush/pipeline.hpp"
#include "fringebrush/reconstruct.hpp"
#include "fringebrush/scene.hpp"
#include "fringebrush/sensing_basis.hpp"

namespace {

using namespace fringebrush;

FloatMap random_map(int height, int width, std::uint64_t seed) {
  FloatMap map(height, width);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& x : map.values()) x = dist(rng);
  return map;
}

// A piecewise-constant column with a few jumps, the signal class the TV
// solver is built for.
std::vector<double> piecewise_column(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(1, n - 1);
  std::uniform_real_distribution<double> level(0.0, 1.0);
  std::vector<double> x(n, level(rng));
  for (int jump = 0; jump < 3; ++jump) {
    const int at = pos(rng);
    const double v = level(rng);
    for (int j = at; j < n; ++j) x[j] = v;
  }
  return x;
}

void BM_HadamardMatrix(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SensingBasis basis = hadamard_matrix(order);
    benchmark::DoNotOptimize(basis.entries.data());
  }
  state.SetComplexityN(order);
}
BENCHMARK(BM_HadamardMatrix)->Arg(256)->Arg(1024)->Complexity();

void BM_CakeCuttingPermutation(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::vector<std::uint32_t> perm = cake_cutting_permutation(order);
    benchmark::DoNotOptimize(perm.data());
  }
}
BENCHMARK(BM_CakeCuttingPermutation)->Arg(256)->Arg(1024);

void BM_FastWalshHadamard(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> seed_values = piecewise_column(n, 7);
  for (auto _ : state) {
    std::vector<double> x = seed_values;
    fwht_inplace(x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_FastWalshHadamard)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_JigsawFringe(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  FringeParams params;
  ArrangementMatrix arr(0);
  for (auto _ : state) {
    FloatMap fringe = jigsaw_fringe(side, side, params, arr, Mode::kCol);
    benchmark::DoNotOptimize(fringe.values().data());
  }
}
BENCHMARK(BM_JigsawFringe)->Arg(256)->Arg(1024);

void BM_ModulateScene(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Scene scene = synthesize_scene("gaussian-bump", side, side, 0);
  Scene stretched = stretch_scene(scene, Mode::kCol);
  FringeParams params;
  ArrangementMatrix arr(0);
  for (auto _ : state) {
    std::vector<FloatMap> frames =
        modulate_scene(stretched, params, arr, Mode::kCol);
    benchmark::DoNotOptimize(frames.data());
  }
}
BENCHMARK(BM_ModulateScene)->Arg(64)->Arg(128);

void BM_MeasureColumns(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FloatMap image = random_map(n, 4 * n, 11);
  SensingBasis basis = hadamard_matrix(n);
  NoiseConfig noise;  // noiseless: isolates the multiply
  for (auto _ : state) {
    MeasurementSet ms = measure_columns(image, basis, Mode::kCol, noise);
    benchmark::DoNotOptimize(ms.columns.data());
  }
}
BENCHMARK(BM_MeasureColumns)->Arg(64)->Arg(128);

void BM_HadamardInverseColumn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SensingBasis basis = cake_cutting(hadamard_matrix(n));
  std::vector<double> truth = piecewise_column(n, 3);
  std::vector<double> c(n, 0.0);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += basis.at(r, j) * truth[j];
    c[r] = acc;
  }
  for (auto _ : state) {
    std::vector<double> x = hadamard_inverse_column(c, basis);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_HadamardInverseColumn)->Arg(64)->Arg(256)->Arg(1024);

void BM_TvProx(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> y = piecewise_column(n, 5);
  {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> dist(0.0, 0.05);
    for (double& v : y) v += dist(rng);
  }
  for (auto _ : state) {
    std::vector<double> x = tv_prox(y, 0.1);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_TvProx)->Arg(64)->Arg(256)->Arg(1024);

void BM_TvSolveColumn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SensingBasis basis =
      truncate_basis(cake_cutting(hadamard_matrix(n)), 0.5);
  std::vector<double> truth = piecewise_column(n, 3);
  std::vector<double> c(basis.rows, 0.0);
  for (int r = 0; r < basis.rows; ++r) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += basis.at(r, j) * truth[j];
    c[r] = acc;
  }
  SolverConfig cfg;
  cfg.method = SolverMethod::kTv;
  for (auto _ : state) {
    TvResult result = tv_solve_column(c, basis, cfg);
    benchmark::DoNotOptimize(result.solution.data());
  }
}
BENCHMARK(BM_TvSolveColumn)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_WrappedPhase(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Scene scene = synthesize_scene("gaussian-bump", side, side, 0);
  Scene stretched = stretch_scene(scene, Mode::kCol);
  FringeParams params;
  ArrangementMatrix arr(0);
  std::vector<FloatMap> frames =
      modulate_scene(stretched, params, arr, Mode::kCol);
  PhaseStack stack = deinterleave(frames[0], arr, Mode::kCol);
  for (auto _ : state) {
    WrappedPhase wp = wrapped_phase(stack);
    benchmark::DoNotOptimize(wp.phase.values().data());
  }
}
BENCHMARK(BM_WrappedPhase)->Arg(128)->Arg(256);

void BM_Unwrap2d(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Scene scene = synthesize_scene("gaussian-bump", side, side, 0);
  Scene stretched = stretch_scene(scene, Mode::kCol);
  FringeParams params;
  ArrangementMatrix arr(0);
  std::vector<FloatMap> frames =
      modulate_scene(stretched, params, arr, Mode::kCol);
  PhaseStack stack = deinterleave(frames[0], arr, Mode::kCol);
  WrappedPhase wp = wrapped_phase(stack);
  for (auto _ : state) {
    FloatMap unwrapped = unwrap_2d(wp.phase, wp.mask);
    benchmark::DoNotOptimize(unwrapped.values().data());
  }
}
BENCHMARK(BM_Unwrap2d)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

// One complete file-backed run at desk scale; dominated by the TV solves,
// with serialization of every stage artifact included on purpose.
void BM_PipelineSmall(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.generator = "gaussian-bump";
  cfg.height = 32;
  cfg.width = 32;
  cfg.ratio = 0.75;
  cfg.ordering = Ordering::kCakeCutting;
  cfg.solver.method = SolverMethod::kTv;
  cfg.noise.variance = 0.0005;
  cfg.noise.seed = 3;
  cfg.workers = static_cast<int>(state.range(0));
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "fringebrush_bench_pipeline";
  std::filesystem::create_directories(dir);
  cfg.out_dir = dir.string();
  for (auto _ : state) {
    PipelineResult result = run_pipeline(cfg);
    benchmark::DoNotOptimize(&result);
  }
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_PipelineSmall)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
