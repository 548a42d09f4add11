#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ascg/common.hpp"

namespace ascg::la {

// Small dense square matrix, row-major. Used for change-of-basis matrices.
class SmallMatrix {
 public:
  SmallMatrix() = default;
  explicit SmallMatrix(std::size_t order) : order_(order), values_(order * order, 0.0) {}

  std::size_t order() const { return order_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * order_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * order_ + j]; }
  std::span<const double> data() const { return values_; }

  // y = M x
  Vector apply(std::span<const double> x) const;

 private:
  std::size_t order_ = 0;
  std::vector<double> values_;
};

// Symmetric matrix in full row-major storage. set() writes both triangles,
// so the stored values are bitwise symmetric.
class SmallSymMatrix {
 public:
  SmallSymMatrix() = default;
  explicit SmallSymMatrix(std::size_t order) : order_(order), values_(order * order, 0.0) {}

  std::size_t order() const { return order_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * order_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * order_ + j] = v;
    values_[j * order_ + i] = v;
  }
  std::span<const double> data() const { return values_; }

  // x^T M y
  double bilinear(std::span<const double> x, std::span<const double> y) const;
  double quadratic(std::span<const double> x) const { return bilinear(x, x); }

  // Principal submatrix on the given row/column indices.
  SmallSymMatrix principal(std::span<const std::size_t> idx) const;

  double frobenius_norm() const;

 private:
  std::size_t order_ = 0;
  std::vector<double> values_;
};

struct EigenOptions {
  double relative_tolerance = 1e-14;
  int max_sweeps = 100;
};

// Eigenvalues (ascending) by cyclic Jacobi rotations.
// Throws ConvergenceError carrying the remaining off-diagonal norm.
std::vector<double> sym_eig(const SmallSymMatrix& m, const EigenOptions& opts = {});

// sqrt(lambda_max / lambda_min) of the principal submatrix of a Gram matrix on
// `cols`, which estimates the 2-norm condition number of the corresponding
// basis columns. Returns +infinity when lambda_min <= order * eps * lambda_max.
double gram_cond_estimate(const SmallSymMatrix& g, std::span<const std::size_t> cols);

// Column indices of the nested sub-basis of size i inside a basis built for
// s_bar: P-columns 0..i followed by R-columns s_bar+1..s_bar+i.
std::vector<std::size_t> sub_basis_columns(std::size_t s_bar, std::size_t i);

// Condition estimates of every nested sub-basis. Entry i (1 <= i <= s_bar)
// estimates kappa(Y_{k,i}); entry 0 is unused and set to 1.
std::vector<double> nested_condition_estimates(const SmallSymMatrix& g, std::size_t s_bar);

}  // namespace ascg::la
