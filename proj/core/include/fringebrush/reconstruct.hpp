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

#include <vector>

#include "fringebrush/float_map.hpp"
#include "fringebrush/measurement.hpp"
#include "fringebrush/sensing_basis.hpp"

namespace fringebrush {

enum class SolverMethod { kHadamardInverse, kTv };

struct SolverConfig {
  SolverMethod method = SolverMethod::kHadamardInverse;
  // Weight of the data-fidelity term in the total-variation objective
  //   sum_j |x_{j+1} - x_j| + (mu / 2) * ||A x - c||^2.
  double mu = 32.0;
  // Stop when the relative iterate change drops below this.
  double tolerance = 1e-6;
  int max_iterations = 500;
  // Store the objective value after every iteration in TvResult.
  bool record_objective = false;
};

struct TvResult {
  std::vector<double> solution;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  std::vector<double> objective_trace;
};

// Exact minimizer of 0.5 * ||x - y||^2 + lam * sum_j |x_{j+1} - x_j|,
// computed by the taut-string construction (shortest path through the
// +/- lam tube around the cumulative sums, pinned at both ends).
std::vector<double> tv_prox(const std::vector<double>& y, double lam);

// Recovers one column from complete measurements: omega = (1/N) * B^T c.
// Requires M == N and rows drawn from the natural Hadamard matrix (in any
// order); evaluated by scattering into natural order and running the fast
// transform.  Throws std::invalid_argument otherwise.
std::vector<double> hadamard_inverse_column(const std::vector<double>& c,
                                            const SensingBasis& basis);

// Approximately minimizes sum_j |x_{j+1} - x_j| + (mu/2) ||A x - c||^2 by
// accelerated proximal-gradient iteration with the exact prox above, using
// gradient step size 1 / (mu * lambda_max(A^T A)).  A monotone safeguard
// keeps an extrapolated candidate only when it lowers the objective and
// otherwise restarts the momentum from the current iterate, so the
// objective never increases from one iterate to the next.  Non-convergence
// within max_iterations is reported through TvResult::converged, not an
// exception.
TvResult tv_solve_column(const std::vector<double>& c,
                         const SensingBasis& basis, const SolverConfig& cfg);

struct ReconstructResult {
  FloatMap image;            // height = basis cols (N), width = column count
  int unconverged_columns = 0;  // TV solves that hit the iteration cap
};

// Reconstructs every measured column and stitches the results side by side.
// Column i of the output depends only on ms.columns[i], so the result is
// identical for any worker count.
ReconstructResult reconstruct_image(const MeasurementSet& ms,
                                    const SensingBasis& basis,
                                    const SolverConfig& cfg, int workers = 1);

}  // namespace fringebrush
