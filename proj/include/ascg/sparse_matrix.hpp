#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ascg/common.hpp"

namespace ascg {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Square CSR matrix. Column indices are sorted within each row.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  std::size_t n_a = 0;  // maximum stored entries in any row
  bool is_symmetric = false;

  std::size_t nnz() const { return values.size(); }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {col_idx.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }

  // Stored value at (i, j), or 0 when not in the pattern.
  double at(std::size_t i, std::size_t j) const;

  // Builds a matrix from (row, col, value) entries; duplicates are summed.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> diag);
};

std::size_t max_row_population(const SparseMatrix& a);

// Compares the stored pattern with its transpose.
bool pattern_is_symmetric(const SparseMatrix& a);

// Entrywise absolute value, same pattern.
SparseMatrix abs_values(const SparseMatrix& a);

// Row-major dense copy; intended for small test problems and dense eigensolves.
std::vector<double> to_dense(const SparseMatrix& a);

}  // namespace ascg
