#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "fringebrush/measurement.hpp"
#include "fringebrush/reconstruct.hpp"
#include "fringebrush/sensing_basis.hpp"
#include "reference_solvers.hpp"
#include "test_util.hpp"

using namespace fringebrush;

namespace {

std::vector<double> random_vector(int n, std::uint64_t seed, double lo = -3.0,
                                  double hi = 3.0) {
  testutil::TestRng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

double rel_l2(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-30);
}

std::vector<double> measure_vector(const std::vector<double>& omega,
                                   const SensingBasis& basis) {
  std::vector<double> c(basis.rows, 0.0);
  for (int r = 0; r < basis.rows; ++r) {
    const std::int8_t* row = basis.row(r);
    double pos = 0.0, neg = 0.0;
    for (int j = 0; j < basis.cols; ++j) {
      (row[j] > 0 ? pos : neg) += omega[j];
    }
    c[r] = pos - neg;
  }
  return c;
}

}  // namespace

TEST_CASE("tv prox matches hand-solved cases") {
  using V = std::vector<double>;
  // Each solved by the stationarity conditions directly.
  {
    V x = tv_prox(V{5.0, 0.0}, 1.0);
    CHECK(x[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    V x = tv_prox(V{0.0, 10.0}, 1.0);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(9.0).epsilon(1e-12));
  }
  {
    V x = tv_prox(V{0.0, 10.0, 0.0}, 1.0);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    // Weight large enough to flatten everything to the mean.
    V x = tv_prox(V{1.0, 2.0, 3.0}, 10.0);
    for (double v : x) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("tv prox degenerate inputs") {
  std::vector<double> y{3.25};
  CHECK(tv_prox(y, 5.0) == y);
  std::vector<double> y2{1.0, -2.0, 7.0};
  CHECK(tv_prox(y2, 0.0) == y2);
  std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
  auto x = tv_prox(flat, 0.7);
  for (double v : x) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(tv_prox(y2, -1.0), std::invalid_argument);
}

TEST_CASE("tv prox preserves the total sum") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto y = random_vector(17 + static_cast<int>(seed), 100 + seed);
    auto x = tv_prox(y, 0.5);
    double sy = 0.0, sx = 0.0;
    for (double v : y) sy += v;
    for (double v : x) sx += v;
    CHECK(sx == doctest::Approx(sy).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("tv prox satisfies the optimality certificate") {
  const double lams[] = {0.01, 0.1, 1.0, 10.0, 100.0};
  for (int n : {2, 3, 5, 8, 17, 33, 64}) {
    for (double lam : lams) {
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto y = random_vector(n, seed * 1000 + n, -10.0, 10.0);
        auto x = tv_prox(y, lam);
        CHECK(refsolve::prox_kkt_violation(y, x, lam) < 1e-9);
      }
    }
  }
}

TEST_CASE("tv prox agrees with the dual projection solver") {
  for (int n : {2, 5, 12, 24}) {
    for (double lam : {0.1, 1.0, 5.0}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto y = random_vector(n, 7 * seed + n, -4.0, 4.0);
        auto x = tv_prox(y, lam);
        auto ref = refsolve::dual_projection_prox(y, lam, 60000);
        for (int i = 0; i < n; ++i) {
          CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-6).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("hadamard inverse undoes complete measurement") {
  for (int n : {2, 8, 64, 256}) {
    SensingBasis natural = hadamard_matrix(n);
    SensingBasis cake = cake_cutting(natural);
    auto omega = random_vector(n, 17 + n);
    for (const SensingBasis* basis : {&natural, &cake}) {
      auto c = measure_vector(omega, *basis);
      auto back = hadamard_inverse_column(c, *basis);
      CHECK(rel_l2(back, omega) < 1e-12);
    }
  }
}

TEST_CASE("hadamard inverse recovers the row order from raw entries") {
  SensingBasis basis = cake_cutting(hadamard_matrix(16));
  basis.natural_index.clear();  // as if loaded from a bare matrix file
  auto omega = random_vector(16, 3);
  auto c = measure_vector(omega, basis);
  auto back = hadamard_inverse_column(c, basis);
  CHECK(rel_l2(back, omega) < 1e-12);
}

TEST_CASE("hadamard inverse rejects unusable bases") {
  SensingBasis truncated = truncate_basis(hadamard_matrix(8), 0.5);
  std::vector<double> c(truncated.rows, 1.0);
  CHECK_THROWS_AS(hadamard_inverse_column(c, truncated),
                  std::invalid_argument);

  SensingBasis corrupted = hadamard_matrix(8);
  corrupted.entries[9] = -corrupted.entries[9];
  corrupted.natural_index.clear();
  std::vector<double> c8(8, 1.0);
  CHECK_THROWS_AS(hadamard_inverse_column(c8, corrupted),
                  std::invalid_argument);

  SensingBasis ok = hadamard_matrix(8);
  std::vector<double> wrong_len(7, 1.0);
  CHECK_THROWS_AS(hadamard_inverse_column(wrong_len, ok),
                  std::invalid_argument);
}

TEST_CASE("tv objective is non-increasing across iterations") {
  SensingBasis basis = truncate_basis(cake_cutting(hadamard_matrix(32)), 0.75);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto c = random_vector(basis.rows, 400 + seed, -8.0, 8.0);
    SolverConfig cfg;
    cfg.method = SolverMethod::kTv;
    cfg.record_objective = true;
    cfg.max_iterations = 300;
    cfg.tolerance = 1e-14;  // force a long trace
    TvResult r = tv_solve_column(c, basis, cfg);
    REQUIRE(r.objective_trace.size() > 10);
    for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
      CHECK(r.objective_trace[t] <=
            r.objective_trace[t - 1] +
                1e-9 * (1.0 + std::fabs(r.objective_trace[t - 1])));
    }
  }
}

TEST_CASE("tv solve recovers a blocky signal from half the measurements") {
  // Order 8, cake-cutting rows 0..3 are natural rows [0, 4, 6, 2]; the
  // measurements of [5 5 5 5 0 0 0 0] pin both half sums and both quarter
  // sums, and the signal is the unique minimum-variation interpolant.
  SensingBasis basis = truncate_basis(cake_cutting(hadamard_matrix(8)), 0.5);
  REQUIRE(basis.natural_index ==
          std::vector<std::uint32_t>({0, 4, 6, 2}));
  std::vector<double> truth{5.0, 5.0, 5.0, 5.0, 0.0, 0.0, 0.0, 0.0};
  auto c = measure_vector(truth, basis);
  CHECK(c == std::vector<double>({20.0, 20.0, 0.0, 0.0}));

  SolverConfig cfg;
  cfg.method = SolverMethod::kTv;
  cfg.tolerance = 1e-10;
  cfg.max_iterations = 5000;
  TvResult r = tv_solve_column(c, basis, cfg);
  CHECK(r.converged);
  CHECK(rel_l2(r.solution, truth) < 1e-2);
  CHECK(refsolve::tv_solution_kkt_violation(c, basis, cfg.mu, r.solution) <
        1e-4);
}

TEST_CASE("tv solve agrees with the splitting reference solver") {
  SensingBasis basis = truncate_basis(cake_cutting(hadamard_matrix(32)), 0.5);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    // Blocky ground truth plus mild noise on the measurements.
    std::vector<double> truth(32, 0.0);
    testutil::TestRng rng(900 + seed);
    int edge1 = 4 + static_cast<int>(rng.uniform_int(0, 8));
    int edge2 = edge1 + 6 + static_cast<int>(rng.uniform_int(0, 8));
    for (int j = 0; j < 32; ++j) {
      truth[j] = j < edge1 ? 2.0 : (j < edge2 ? -1.0 : 0.5);
    }
    auto c = measure_vector(truth, basis);
    for (auto& v : c) v += rng.uniform(-0.05, 0.05);

    SolverConfig cfg;
    cfg.method = SolverMethod::kTv;
    cfg.tolerance = 1e-12;
    cfg.max_iterations = 20000;
    TvResult r = tv_solve_column(c, basis, cfg);
    auto ref = refsolve::admm_tv_reference(c, basis, cfg.mu, cfg.mu, 20000);

    // Both should sit at the shared optimum: compare objectives and iterates.
    auto objective = [&](const std::vector<double>& x) {
      double tv = 0.0;
      for (int j = 0; j + 1 < 32; ++j) tv += std::fabs(x[j + 1] - x[j]);
      double fit = 0.0;
      auto ax = measure_vector(x, basis);
      for (int i = 0; i < basis.rows; ++i) {
        fit += (ax[i] - c[i]) * (ax[i] - c[i]);
      }
      return tv + 0.5 * cfg.mu * fit;
    };
    const double jr = objective(r.solution);
    const double ja = objective(ref);
    CHECK(std::fabs(jr - ja) <= 1e-5 * (1.0 + std::fabs(ja)));
    CHECK(rel_l2(r.solution, ref) < 1e-3);
    CHECK(refsolve::tv_solution_kkt_violation(c, basis, cfg.mu, r.solution) <
          1e-4);
  }
}

TEST_CASE("tv solve with a complete basis approaches the exact inverse") {
  const int n = 32;
  SensingBasis basis = hadamard_matrix(n);
  auto omega = random_vector(n, 5);
  auto c = measure_vector(omega, basis);
  SolverConfig cfg;
  cfg.method = SolverMethod::kTv;
  cfg.mu = 1e3;  // strong fidelity: the variation bias shrinks as 1/mu
  cfg.tolerance = 1e-12;
  cfg.max_iterations = 10000;
  TvResult r = tv_solve_column(c, basis, cfg);
  auto exact = hadamard_inverse_column(c, basis);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    worst = std::max(worst, std::fabs(r.solution[j] - exact[j]));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("tv solve reports hitting the iteration cap without throwing") {
  SensingBasis basis = truncate_basis(cake_cutting(hadamard_matrix(32)), 0.75);
  auto c = random_vector(basis.rows, 1, -8.0, 8.0);
  SolverConfig cfg;
  cfg.method = SolverMethod::kTv;
  cfg.tolerance = 1e-15;
  cfg.max_iterations = 3;
  TvResult r = tv_solve_column(c, basis, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.solution.size() == 32);
}

TEST_CASE("tv solve validates its configuration") {
  SensingBasis basis = hadamard_matrix(8);
  std::vector<double> c(8, 1.0);
  SolverConfig cfg;
  cfg.mu = 0.0;
  CHECK_THROWS_AS(tv_solve_column(c, basis, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(tv_solve_column(c, basis, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(tv_solve_column(c, basis, cfg), std::invalid_argument);
  std::vector<double> short_c(7, 1.0);
  CHECK_THROWS_AS(tv_solve_column(short_c, basis, SolverConfig{}),
                  std::invalid_argument);
}

TEST_CASE("image reconstruction stitches columns and honors workers") {
  const int n = 64;
  SensingBasis basis = cake_cutting(hadamard_matrix(n));
  testutil::TestRng rng(12);
  FloatMap img(n, 9);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < 9; ++v) img(u, v) = rng.uniform(-2.0, 2.0);
  }
  auto ms = measure_columns(img, basis, Mode::kCol, NoiseConfig{});
  SolverConfig cfg;  // hadamard inverse
  auto serial = reconstruct_image(ms, basis, cfg, 1);
  auto parallel = reconstruct_image(ms, basis, cfg, 5);
  CHECK(serial.unconverged_columns == 0);
  CHECK(testutil::bitwise_equal(serial.image, parallel.image));
  CHECK(testutil::max_abs_diff(serial.image, img) < 1e-12);

  // Per-column results match the stitched image exactly.
  for (int i = 0; i < 9; ++i) {
    auto col = hadamard_inverse_column(ms.columns[i], basis);
    for (int u = 0; u < n; ++u) CHECK(col[u] == serial.image(u, i));
  }
}

TEST_CASE("image reconstruction with the tv method is deterministic") {
  SensingBasis basis = truncate_basis(cake_cutting(hadamard_matrix(16)), 0.5);
  FloatMap img(16, 6);
  for (int u = 0; u < 16; ++u) {
    for (int v = 0; v < 6; ++v) img(u, v) = u < 8 ? 1.0 + 0.1 * v : -0.5;
  }
  auto ms = measure_columns(img, basis, Mode::kCol, NoiseConfig{});
  SolverConfig cfg;
  cfg.method = SolverMethod::kTv;
  cfg.max_iterations = 2000;
  auto serial = reconstruct_image(ms, basis, cfg, 1);
  auto parallel = reconstruct_image(ms, basis, cfg, 8);
  CHECK(testutil::bitwise_equal(serial.image, parallel.image));
  CHECK(serial.unconverged_columns == parallel.unconverged_columns);
  CHECK(serial.image.height() == 16);
  CHECK(serial.image.width() == 6);
}

TEST_CASE("image reconstruction validates inputs") {
  SensingBasis basis = truncate_basis(hadamard_matrix(8), 0.5);
  MeasurementSet ms;
  ms.basis_rows = 4;
  ms.basis_cols = 8;
  ms.columns = {std::vector<double>(4, 1.0)};
  SolverConfig hadamard_cfg;  // M != N: the fast inverse must refuse
  CHECK_THROWS_AS(reconstruct_image(ms, basis, hadamard_cfg),
                  std::invalid_argument);

  MeasurementSet mismatched = ms;
  mismatched.basis_rows = 5;
  SolverConfig tv_cfg;
  tv_cfg.method = SolverMethod::kTv;
  CHECK_THROWS_AS(reconstruct_image(mismatched, basis, tv_cfg),
                  std::invalid_argument);

  MeasurementSet empty;
  empty.basis_rows = 4;
  empty.basis_cols = 8;
  CHECK_THROWS_AS(reconstruct_image(empty, basis, tv_cfg),
                  std::invalid_argument);
}
