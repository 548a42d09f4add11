#include "ascg/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ascg::la {

namespace {

// Below these sizes a parallel region costs more than it saves.
constexpr std::size_t kParallelRows = 20000;
constexpr std::size_t kParallelGramRows = 4096;

inline double row_dot(const SparseMatrix& a, std::size_t i, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) acc += a.values[k] * x[a.col_idx[k]];
  return acc;
}

inline double column_combination(const DenseBlock& y, std::span<const double> coeffs, std::size_t row) {
  double acc = 0.0;
  for (std::size_t j = 0; j < y.cols(); ++j) acc += y.col(j)[row] * coeffs[j];
  return acc;
}

void check_spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.n || y.size() != a.n) throw DimensionError("spmv: dimension mismatch");
}

}  // namespace

DenseBlock DenseBlock::select(std::span<const std::size_t> cols) const {
  DenseBlock out(rows_, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    auto src = col(cols[k]);
    std::copy(src.begin(), src.end(), out.col(k).begin());
  }
  return out;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n);
#pragma omp parallel for schedule(static) if (a.n >= kParallelRows)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = row_dot(a, static_cast<std::size_t>(i), x);
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.n);
  spmv(a, x, y);
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

SmallSymMatrix gram(const DenseBlock& y) {
  const std::size_t m = y.cols();
  SmallSymMatrix g(m);
  const std::ptrdiff_t pairs = static_cast<std::ptrdiff_t>(m * (m + 1) / 2);
  std::vector<double> vals(static_cast<std::size_t>(pairs));
#pragma omp parallel for schedule(dynamic) if (y.rows() >= kParallelGramRows)
  for (std::ptrdiff_t p = 0; p < pairs; ++p) {
    // Unrank p into (i, j), i <= j, row-major over the upper triangle.
    std::size_t i = 0, rem = static_cast<std::size_t>(p);
    while (rem >= m - i) rem -= m - i++;
    const std::size_t j = i + rem;
    vals[static_cast<std::size_t>(p)] = dot(y.col(i), y.col(j));
  }
  std::size_t p = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) g.set(i, j, vals[p++]);
  return g;
}

void combine(const DenseBlock& y, std::span<const double> coeffs, std::span<double> out) {
  if (coeffs.size() != y.cols() || out.size() != y.rows()) throw DimensionError("combine: dimension mismatch");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.rows());
#pragma omp parallel for schedule(static) if (y.rows() >= kParallelRows)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = column_combination(y, coeffs, static_cast<std::size_t>(i));
}

namespace serial {

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  for (std::size_t i = 0; i < a.n; ++i) y[i] = row_dot(a, i, x);
}

SmallSymMatrix gram(const DenseBlock& y) {
  SmallSymMatrix g(y.cols());
  for (std::size_t i = 0; i < y.cols(); ++i)
    for (std::size_t j = i; j < y.cols(); ++j) g.set(i, j, la::dot(y.col(i), y.col(j)));
  return g;
}

void combine(const DenseBlock& y, std::span<const double> coeffs, std::span<double> out) {
  if (coeffs.size() != y.cols() || out.size() != y.rows()) throw DimensionError("combine: dimension mismatch");
  for (std::size_t i = 0; i < y.rows(); ++i) out[i] = column_combination(y, coeffs, i);
}

}  // namespace serial

bool parallel_kernels_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace ascg::la
