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

#include "fringebrush/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace fringebrush {
namespace {

// Signed accumulation split into positive and negative partial sums, matching
// the measurement path so forward/adjoint products stay reproducible.
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

// out += sign(row) * v, one basis row at a time (adjoint application).
void add_signed_row(std::vector<double>& out, const std::int8_t* row,
                    double v, int n) {
  for (int j = 0; j < n; ++j) {
    if (row[j] > 0) {
      out[j] += v;
    } else {
      out[j] -= v;
    }
  }
}

std::vector<double> adjoint_apply(const SensingBasis& basis,
                                  const std::vector<double>& r) {
  std::vector<double> out(basis.cols, 0.0);
  for (int i = 0; i < basis.rows; ++i) {
    add_signed_row(out, basis.row(i), r[i], basis.cols);
  }
  return out;
}

double tv_seminorm(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    s += std::fabs(x[j + 1] - x[j]);
  }
  return s;
}

double tv_objective(const std::vector<double>& x,
                    const std::vector<double>& residual, double mu) {
  double fit = 0.0;
  for (double r : residual) fit += r * r;
  return tv_seminorm(x) + 0.5 * mu * fit;
}

// Largest eigenvalue of A^T A.  Rows taken from an order-N Hadamard matrix
// are mutually orthogonal with squared norm N, so every nonzero eigenvalue
// equals N exactly.  For arbitrary +/-1 rows fall back to the safe bound
// ||A||_1 * ||A||_inf = M * N.
double gram_spectral_bound(const SensingBasis& basis) {
  if (!basis.natural_index.empty() || probe_natural_index(basis)) {
    return static_cast<double>(basis.cols);
  }
  return static_cast<double>(basis.rows) * static_cast<double>(basis.cols);
}

std::vector<std::uint32_t> require_natural_index(const SensingBasis& basis) {
  if (!basis.natural_index.empty()) return basis.natural_index;
  auto probed = probe_natural_index(basis);
  if (!probed) {
    throw std::invalid_argument(
        "hadamard inverse requires rows of the natural Hadamard matrix; use "
        "the tv method for other bases");
  }
  return *probed;
}

std::vector<double> inverse_with_index(
    const std::vector<double>& c, int n,
    const std::vector<std::uint32_t>& natural_index) {
  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) z[natural_index[i]] = c[i];
  fwht_inplace(z);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : z) v *= scale;
  return z;
}

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

}  // namespace

std::vector<double> tv_prox(const std::vector<double>& y, double lam) {
  const int n = static_cast<int>(y.size());
  if (!(lam >= 0.0)) {
    throw std::invalid_argument("tv_prox: weight must be non-negative");
  }
  if (n <= 1 || lam == 0.0) return y;

  // cum[k] = sum of the first k samples.  The solution's running sums form
  // the shortest path from (0, 0) to (n, cum[n]) staying within lam of the
  // data's running sums at every interior point; per-sample values are the
  // path's increments.
  std::vector<double> cum(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k < n; ++k) cum[k + 1] = cum[k] + y[k];

  std::vector<double> x(n);
  const double inf = std::numeric_limits<double>::infinity();
  int a = 0;        // anchor: last pinned path point
  double sa = 0.0;  // path value at the anchor
  while (a < n) {
    double hi = inf;  // tightest slope cap from the upper tube wall
    int jhi = a;
    double lo = -inf;  // tightest slope floor from the lower tube wall
    int jlo = a;
    for (int k = a + 1; k <= n; ++k) {
      const double run = static_cast<double>(k - a);
      if (k == n) {
        // Endpoint is pinned: either the straight segment fits, or the path
        // bends at the binding wall contact and the scan restarts there.
        const double s_end = (cum[n] - sa) / run;
        if (s_end > hi) {
          for (int i = a; i < jhi; ++i) x[i] = hi;
          sa = cum[jhi] + lam;
          a = jhi;
        } else if (s_end < lo) {
          for (int i = a; i < jlo; ++i) x[i] = lo;
          sa = cum[jlo] - lam;
          a = jlo;
        } else {
          for (int i = a; i < n; ++i) x[i] = s_end;
          a = n;
        }
        break;
      }
      const double s_hi = (cum[k] + lam - sa) / run;
      const double s_lo = (cum[k] - lam - sa) / run;
      if (s_lo > hi) {  // must rise above the upper wall: bend at jhi
        for (int i = a; i < jhi; ++i) x[i] = hi;
        sa = cum[jhi] + lam;
        a = jhi;
        break;
      }
      if (s_hi < lo) {  // must dip below the lower wall: bend at jlo
        for (int i = a; i < jlo; ++i) x[i] = lo;
        sa = cum[jlo] - lam;
        a = jlo;
        break;
      }
      if (s_hi <= hi) {
        hi = s_hi;
        jhi = k;
      }
      if (s_lo >= lo) {
        lo = s_lo;
        jlo = k;
      }
    }
  }
  return x;
}

std::vector<double> hadamard_inverse_column(const std::vector<double>& c,
                                            const SensingBasis& basis) {
  if (static_cast<int>(c.size()) != basis.rows) {
    throw std::invalid_argument(
        "hadamard_inverse_column: measurement length must equal basis rows");
  }
  if (basis.rows != basis.cols) {
    throw std::invalid_argument(
        "hadamard inverse requires a complete basis (M == N); use the tv "
        "method for truncated measurements");
  }
  return inverse_with_index(c, basis.cols, require_natural_index(basis));
}

TvResult tv_solve_column(const std::vector<double>& c,
                         const SensingBasis& basis, const SolverConfig& cfg) {
  if (static_cast<int>(c.size()) != basis.rows) {
    throw std::invalid_argument(
        "tv_solve_column: measurement length must equal basis rows");
  }
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(cfg.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }

  const int m = basis.rows;
  const int n = basis.cols;
  const double lam_max = gram_spectral_bound(basis);
  const double prox_weight = 1.0 / (cfg.mu * lam_max);

  // Backprojection start: x = (1/N) A^T c.
  std::vector<double> x = adjoint_apply(basis, c);
  for (double& v : x) v /= static_cast<double>(n);

  std::vector<double> residual(m);
  auto compute_residual = [&](const std::vector<double>& v) {
    for (int i = 0; i < m; ++i) {
      residual[i] = signed_dot(basis.row(i), v.data(), n) - c[i];
    }
  };

  TvResult result;
  if (cfg.record_objective) result.objective_trace.reserve(cfg.max_iterations);

  compute_residual(x);
  double fx = tv_objective(x, residual, cfg.mu);
  std::vector<double> x_prev = x;  // previous accepted iterate
  std::vector<double> y = x;       // extrapolated evaluation point
  double t = 1.0;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    // Gradient step on the fidelity term at the extrapolated point, then
    // the exact prox.
    compute_residual(y);
    std::vector<double> grad = adjoint_apply(basis, residual);
    std::vector<double> step(n);
    for (int j = 0; j < n; ++j) step[j] = y[j] - grad[j] / lam_max;
    std::vector<double> z = tv_prox(step, prox_weight);
    compute_residual(z);
    const double fz = tv_objective(z, residual, cfg.mu);

    result.iterations = it;
    if (fz > fx) {
      // The extrapolation overshot: keep the current iterate, restart the
      // momentum from it, and re-step.  A plain proximal step from x cannot
      // increase the objective, so progress resumes on the next iteration.
      y = x;
      t = 1.0;
      if (cfg.record_objective) result.objective_trace.push_back(fx);
      continue;
    }

    double diff2 = 0.0;
    double norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = z[j] - x[j];
      diff2 += d * d;
      norm2 += x[j] * x[j];
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    x_prev = std::move(x);
    x = std::move(z);
    fx = fz;
    for (int j = 0; j < n; ++j) {
      y[j] = x[j] + ((t - 1.0) / t_next) * (x[j] - x_prev[j]);
    }
    t = t_next;
    if (cfg.record_objective) result.objective_trace.push_back(fx);
    if (std::sqrt(diff2) <= cfg.tolerance * std::max(std::sqrt(norm2), 1.0)) {
      result.converged = true;
      break;
    }
  }
  result.objective = fx;
  result.solution = std::move(x);
  return result;
}

ReconstructResult reconstruct_image(const MeasurementSet& ms,
                                    const SensingBasis& basis,
                                    const SolverConfig& cfg, int workers) {
  if (ms.basis_rows != basis.rows || ms.basis_cols != basis.cols) {
    throw std::invalid_argument(
        "reconstruct_image: measurement set and basis dimensions disagree");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const int w = ms.column_count();
  if (w == 0) {
    throw std::invalid_argument("reconstruct_image: no measurement columns");
  }
  for (const auto& c : ms.columns) {
    if (static_cast<int>(c.size()) != ms.basis_rows) {
      throw std::invalid_argument(
          "reconstruct_image: measurement column length mismatch");
    }
  }

  const int n = basis.cols;
  ReconstructResult result;
  result.image = FloatMap(n, w);
  std::vector<std::uint8_t> capped(w, 0);

  if (cfg.method == SolverMethod::kHadamardInverse) {
    if (basis.rows != basis.cols) {
      throw std::invalid_argument(
          "hadamard inverse requires a complete basis (M == N); use the tv "
          "method for truncated measurements");
    }
    const std::vector<std::uint32_t> index = require_natural_index(basis);
    parallel_columns(w, workers, [&](int i) {
      std::vector<double> col = inverse_with_index(ms.columns[i], n, index);
      for (int u = 0; u < n; ++u) result.image(u, i) = col[u];
    });
  } else {
    parallel_columns(w, workers, [&](int i) {
      TvResult r = tv_solve_column(ms.columns[i], basis, cfg);
      if (!r.converged) capped[i] = 1;
      for (int u = 0; u < n; ++u) result.image(u, i) = r.solution[u];
    });
  }

  for (int i = 0; i < w; ++i) result.unconverged_columns += capped[i];
  return result;
}

}  // namespace fringebrush
