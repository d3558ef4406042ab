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

#include "fringebrush/sensing_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fringebrush {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

SensingBasis hadamard_matrix(int order) {
  if (!is_power_of_two(order)) {
    throw std::invalid_argument(
        "hadamard_matrix: order must be a power of two");
  }
  SensingBasis basis;
  basis.rows = order;
  basis.cols = order;
  basis.ordering = Ordering::kNatural;
  basis.entries.assign(static_cast<std::size_t>(order) * order, 0);
  basis.entries[0] = 1;
  // Block doubling: [H H; H -H].
  for (int size = 1; size < order; size *= 2) {
    for (int r = 0; r < size; ++r) {
      const std::int8_t* src = basis.entries.data() +
                               static_cast<std::size_t>(r) * order;
      std::int8_t* right = basis.entries.data() +
                           static_cast<std::size_t>(r) * order + size;
      std::int8_t* below = basis.entries.data() +
                           static_cast<std::size_t>(r + size) * order;
      std::int8_t* diag = below + size;
      for (int c = 0; c < size; ++c) {
        right[c] = src[c];
        below[c] = src[c];
        diag[c] = static_cast<std::int8_t>(-src[c]);
      }
    }
  }
  basis.natural_index.resize(order);
  std::iota(basis.natural_index.begin(), basis.natural_index.end(), 0u);
  return basis;
}

int block_count(const std::int8_t* row, int n) {
  int blocks = n > 0 ? 1 : 0;
  for (int c = 1; c < n; ++c) {
    blocks += (row[c] != row[c - 1]);
  }
  return blocks;
}

std::vector<std::uint32_t> cake_cutting_permutation(int order) {
  SensingBasis natural = hadamard_matrix(order);
  std::vector<int> counts(order);
  for (int r = 0; r < order; ++r) {
    counts[r] = block_count(natural.row(r), order);
  }
  std::vector<std::uint32_t> perm(order);
  std::iota(perm.begin(), perm.end(), 0u);
  std::stable_sort(perm.begin(), perm.end(),
                   [&counts](std::uint32_t a, std::uint32_t b) {
                     return counts[a] < counts[b];
                   });
  return perm;
}

SensingBasis cake_cutting(const SensingBasis& basis) {
  if (basis.rows != basis.cols || basis.ordering != Ordering::kNatural) {
    throw std::invalid_argument(
        "cake_cutting: expects a complete natural-order basis");
  }
  std::vector<std::uint32_t> perm = cake_cutting_permutation(basis.cols);
  SensingBasis out;
  out.rows = basis.rows;
  out.cols = basis.cols;
  out.ordering = Ordering::kCakeCutting;
  out.entries.resize(basis.entries.size());
  out.natural_index.resize(basis.rows);
  for (int r = 0; r < out.rows; ++r) {
    const std::int8_t* src = basis.row(static_cast<int>(perm[r]));
    std::copy(src, src + basis.cols,
              out.entries.begin() + static_cast<std::size_t>(r) * out.cols);
    out.natural_index[r] = basis.natural_index[perm[r]];
  }
  return out;
}

SensingBasis truncate_basis(const SensingBasis& basis, double ratio) {
  if (!(ratio > 0.0) || ratio > 1.0) {
    throw std::invalid_argument("truncate_basis: ratio must be in (0, 1]");
  }
  int kept = static_cast<int>(std::llround(ratio * basis.rows));
  if (kept < 1) {
    throw std::invalid_argument("truncate_basis: ratio keeps no rows");
  }
  SensingBasis out;
  out.rows = kept;
  out.cols = basis.cols;
  out.ordering = basis.ordering;
  out.entries.assign(basis.entries.begin(),
                     basis.entries.begin() +
                         static_cast<std::size_t>(kept) * basis.cols);
  if (!basis.natural_index.empty()) {
    out.natural_index.assign(basis.natural_index.begin(),
                             basis.natural_index.begin() + kept);
  }
  return out;
}

BasisSplit split_positive_negative(const SensingBasis& basis) {
  BasisSplit split;
  split.rows = basis.rows;
  split.cols = basis.cols;
  split.ordering = basis.ordering;
  split.positive.resize(basis.entries.size());
  split.negative.resize(basis.entries.size());
  for (std::size_t i = 0; i < basis.entries.size(); ++i) {
    std::int8_t e = basis.entries[i];
    if (e != 1 && e != -1) {
      throw std::invalid_argument(
          "split_positive_negative: entries must be +1 or -1");
    }
    split.positive[i] = e == 1 ? 1 : 0;
    split.negative[i] = e == -1 ? 1 : 0;
  }
  return split;
}

void fwht_inplace(std::vector<double>& x) {
  const std::size_t n = x.size();
  if (!is_power_of_two(static_cast<int>(n))) {
    throw std::invalid_argument("fwht_inplace: length must be a power of two");
  }
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        double a = x[j];
        double b = x[j + len];
        x[j] = a + b;
        x[j + len] = a - b;
      }
    }
  }
}

std::optional<std::vector<std::uint32_t>> probe_natural_index(
    const SensingBasis& basis) {
  if (!is_power_of_two(basis.cols) || basis.rows > basis.cols) {
    return std::nullopt;
  }
  // A natural-order row r satisfies row[c] = (-1)^popcount(r & c).  Reading
  // the entries at the power-of-two columns recovers the bits of r; a full
  // scan then validates the guess.
  std::vector<std::uint32_t> index(basis.rows);
  for (int r = 0; r < basis.rows; ++r) {
    const std::int8_t* row = basis.row(r);
    std::uint32_t guess = 0;
    for (int bit = 1; bit < basis.cols; bit <<= 1) {
      if (row[bit] == -1) guess |= static_cast<std::uint32_t>(bit);
    }
    for (int c = 0; c < basis.cols; ++c) {
      int sign = __builtin_popcount(guess & static_cast<std::uint32_t>(c)) & 1
                     ? -1
                     : 1;
      if (row[c] != sign) return std::nullopt;
    }
    index[r] = guess;
  }
  return index;
}

bool recover_natural_index(SensingBasis& basis) {
  basis.natural_index.clear();
  auto index = probe_natural_index(basis);
  if (!index) return false;
  basis.natural_index = std::move(*index);
  return true;
}

}  // namespace fringebrush
