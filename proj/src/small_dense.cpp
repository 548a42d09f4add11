#include "ascg/small_dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ascg::la {

Vector SmallMatrix::apply(std::span<const double> x) const {
  if (x.size() != order_) throw DimensionError("SmallMatrix::apply: size mismatch");
  Vector y(order_, 0.0);
  for (std::size_t i = 0; i < order_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < order_; ++j) acc += values_[i * order_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

double SmallSymMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != order_ || y.size() != order_)
    throw DimensionError("SmallSymMatrix::bilinear: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < order_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < order_; ++j) row += values_[i * order_ + j] * y[j];
    acc += x[i] * row;
  }
  return acc;
}

SmallSymMatrix SmallSymMatrix::principal(std::span<const std::size_t> idx) const {
  SmallSymMatrix sub(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) sub.set(a, b, (*this)(idx[a], idx[b]));
  return sub;
}

double SmallSymMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return std::sqrt(acc);
}

namespace {

double off_norm(const std::vector<double>& a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) acc += a[i * n + j] * a[i * n + j];
  return std::sqrt(acc);
}

}  // namespace

std::vector<double> sym_eig(const SmallSymMatrix& m, const EigenOptions& opts) {
  const std::size_t n = m.order();
  if (n == 0) throw DimensionError("sym_eig: empty matrix");
  std::vector<double> a(m.data().begin(), m.data().end());

  const double target = opts.relative_tolerance * m.frobenius_norm();
  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    if (off_norm(a, n) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        // Rutishauser's stable rotation.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
      }
    }
  }
  const double remaining = off_norm(a, n);
  if (remaining > target)
    throw ConvergenceError("sym_eig: Jacobi sweeps exhausted", remaining);

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

double gram_cond_estimate(const SmallSymMatrix& g, std::span<const std::size_t> cols) {
  if (cols.empty()) throw ParameterError("gram_cond_estimate: empty index set");
  for (auto c : cols)
    if (c >= g.order()) throw ParameterError("gram_cond_estimate: index out of range");

  const auto eig = sym_eig(g.principal(cols));
  const double lmin = eig.front(), lmax = eig.back();
  if (!(lmax > 0.0)) return std::numeric_limits<double>::infinity();
  if (lmin <= static_cast<double>(cols.size()) * kUnitRoundoff * lmax)
    return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

std::vector<std::size_t> sub_basis_columns(std::size_t s_bar, std::size_t i) {
  std::vector<std::size_t> cols;
  cols.reserve(2 * i + 1);
  for (std::size_t c = 0; c <= i; ++c) cols.push_back(c);
  for (std::size_t c = 1; c <= i; ++c) cols.push_back(s_bar + c);
  return cols;
}

std::vector<double> nested_condition_estimates(const SmallSymMatrix& g, std::size_t s_bar) {
  if (g.order() != 2 * s_bar + 1)
    throw DimensionError("nested_condition_estimates: Gram order does not match s_bar");
  std::vector<double> conds(s_bar + 1, 1.0);
  for (std::size_t i = 1; i <= s_bar; ++i)
    conds[i] = gram_cond_estimate(g, sub_basis_columns(s_bar, i));
  return conds;
}

}  // namespace ascg::la
