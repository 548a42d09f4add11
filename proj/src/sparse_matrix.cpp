#include "ascg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace ascg {

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values[row_ptr[i] + static_cast<std::size_t>(it - cols.begin())];
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row >= n || t.col >= n) throw DimensionError("triplet index out of range");

  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  m.col_idx.reserve(entries.size());
  m.values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const std::size_t r = entries[k].row, c = entries[k].col;
    double sum = 0.0;
    for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k)
      sum += entries[k].value;
    m.col_idx.push_back(c);
    m.values.push_back(sum);
    ++m.row_ptr[r + 1];
  }
  for (std::size_t i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  m.n_a = max_row_population(m);
  m.is_symmetric = pattern_is_symmetric(m);
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
  SparseMatrix m;
  m.n = diag.size();
  m.row_ptr.resize(m.n + 1);
  for (std::size_t i = 0; i < m.n; ++i) {
    m.row_ptr[i] = i;
    m.col_idx.push_back(i);
    m.values.push_back(diag[i]);
  }
  m.row_ptr[m.n] = m.n;
  m.n_a = m.n > 0 ? 1 : 0;
  m.is_symmetric = true;
  return m;
}

std::size_t max_row_population(const SparseMatrix& a) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < a.n; ++i) best = std::max(best, a.row_ptr[i + 1] - a.row_ptr[i]);
  return best;
}

bool pattern_is_symmetric(const SparseMatrix& a) {
  // Every stored (i, j) must have a stored (j, i).
  std::vector<std::size_t> cursor(a.row_ptr.begin(), a.row_ptr.end() - 1);
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const std::size_t j = a.col_idx[k];
      // Transposed entries of row j arrive in increasing i order.
      if (cursor[j] >= a.row_ptr[j + 1] || a.col_idx[cursor[j]] != i) return false;
      ++cursor[j];
    }
  }
  for (std::size_t j = 0; j < a.n; ++j)
    if (cursor[j] != a.row_ptr[j + 1]) return false;
  return true;
}

SparseMatrix abs_values(const SparseMatrix& a) {
  SparseMatrix m = a;
  for (double& v : m.values) v = std::fabs(v);
  return m;
}

std::vector<double> to_dense(const SparseMatrix& a) {
  std::vector<double> d(a.n * a.n, 0.0);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      d[i * a.n + a.col_idx[k]] = a.values[k];
  return d;
}

}  // namespace ascg
