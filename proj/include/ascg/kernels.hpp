#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ascg/common.hpp"
#include "ascg/small_dense.hpp"
#include "ascg/sparse_matrix.hpp"

// Vector kernels. Each kernel keeps a fixed accumulation order per output
// entry, so the OpenMP versions (row- or pair-parallel) are bitwise identical
// to the serial references in ascg::la::serial.
namespace ascg::la {

// Tall-skinny column-major block of basis vectors (n rows, `cols` columns).
class DenseBlock {
 public:
  DenseBlock() = default;
  DenseBlock(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  // New block holding the listed columns, in order.
  DenseBlock select(std::span<const std::size_t> cols) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
Vector spmv(const SparseMatrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// G(i, j) = y_i^T y_j, one dot product per unordered pair.
SmallSymMatrix gram(const DenseBlock& y);

// out = Y * coeffs
void combine(const DenseBlock& y, std::span<const double> coeffs, std::span<double> out);

namespace serial {
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
SmallSymMatrix gram(const DenseBlock& y);
void combine(const DenseBlock& y, std::span<const double> coeffs, std::span<double> out);
}  // namespace serial

// Whether the library was built with OpenMP kernels.
bool parallel_kernels_enabled();

}  // namespace ascg::la
