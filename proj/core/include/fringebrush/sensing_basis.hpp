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
#include <optional>
#include <vector>

#include "fringebrush/float_map.hpp"

namespace fringebrush {

// Row order of a sensing basis.  kNatural is the Sylvester construction
// order; kCakeCutting sorts rows by ascending block count so a truncated
// prefix keeps the lowest-complexity rows; kCustom marks matrices loaded
// from files whose rows match neither generator.
enum class Ordering { kNatural, kCakeCutting, kCustom };

// M x N matrix of +/-1 entries whose rows are the sensing patterns applied to
// an image column.  Rows generated here are always rows of the order-N
// Sylvester Hadamard matrix; `natural_index` records each row's position in
// that matrix when known (used for the fast inverse; empty otherwise).
struct SensingBasis {
  int rows = 0;
  int cols = 0;
  Ordering ordering = Ordering::kNatural;
  std::vector<std::int8_t> entries;  // row-major, entries in {-1, +1}
  std::vector<std::uint32_t> natural_index;

  std::int8_t at(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }
  const std::int8_t* row(int r) const {
    return entries.data() + static_cast<std::size_t>(r) * cols;
  }
  double sampling_ratio() const {
    return cols == 0 ? 0.0 : static_cast<double>(rows) / cols;
  }
};

// Unipolar decomposition of a basis: positive = (1 + T) / 2 and
// negative = (1 - T) / 2, each with entries in {0, 1}, so that
// positive - negative reproduces T.
struct BasisSplit {
  int rows = 0;
  int cols = 0;
  Ordering ordering = Ordering::kNatural;
  std::vector<std::uint8_t> positive;
  std::vector<std::uint8_t> negative;

  const std::uint8_t* positive_row(int r) const {
    return positive.data() + static_cast<std::size_t>(r) * cols;
  }
  const std::uint8_t* negative_row(int r) const {
    return negative.data() + static_cast<std::size_t>(r) * cols;
  }
};

// Complete order-N Hadamard matrix in natural (Sylvester) order, built by
// repeated block doubling.  `order` must be a power of two (1 is allowed).
SensingBasis hadamard_matrix(int order);

// Number of maximal constant runs in a +/-1 row; the cake-cutting sort key.
int block_count(const std::int8_t* row, int n);

// Row permutation that sorts a natural-order basis by ascending block count,
// breaking ties by ascending natural index.
std::vector<std::uint32_t> cake_cutting_permutation(int order);

// Reorders a complete natural-order basis into cake-cutting order.
SensingBasis cake_cutting(const SensingBasis& basis);

// Keeps the first round(ratio * N) rows of the basis in its current order.
// `ratio` must lie in (0, 1] and must keep at least one row.
SensingBasis truncate_basis(const SensingBasis& basis, double ratio);

// Splits a +/-1 basis into its unipolar positive and negative halves.
BasisSplit split_positive_negative(const SensingBasis& basis);

// In-place unnormalized Walsh-Hadamard transform in natural order; applying
// it to a length-2^k vector x computes H * x.
void fwht_inplace(std::vector<double>& x);

// Computes each row's position in the natural Hadamard matrix without
// modifying the basis; nullopt if any row is not a natural-order row.
std::optional<std::vector<std::uint32_t>> probe_natural_index(
    const SensingBasis& basis);

// Reconstructs `natural_index` for a basis whose rows are (possibly permuted
// or truncated) rows of the natural Hadamard matrix.  Returns false and
// leaves the index empty if any row is not such a row.
bool recover_natural_index(SensingBasis& basis);

}  // namespace fringebrush
