#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "ascg/basis.hpp"
#include "ascg/matio.hpp"
#include "ascg/trace.hpp"

namespace ascg {

// Coordinates of x - x_m, r and p in the columns of the current basis.
struct CoordState {
  Vector xp, rp, pp;
  std::size_t j = 0;

  // p' selects P-column 0, r' selects R-column 0, x' = 0.
  static CoordState initial(std::size_t s);
};

struct RecoveredIterates {
  Vector x, r, p;
};

// [x - x_base, r, p] = Y [x', r', p'].
RecoveredIterates recover_iterates(const SStepBlock& block, const CoordState& coords, std::span<const double> x_base);

struct SStepOptions {
  std::size_t s = 10;
  BasisKind basis = BasisKind::Monomial;
  // Spectral bounds for Newton/Chebyshev; without them the basis is monomial.
  std::optional<std::pair<double, double>> spectral_bounds;
  double eps_star = 1e-6;
  std::size_t max_outer = 0;  // 0 selects 100 * n / s + 1
  std::size_t leja_grid = 10000;
  StopRules stop;
};

// Fixed s-step CG: one basis and one Gram matrix per block of s iterations,
// with alpha/beta and the residual norm computed from the Gram matrix.
SolveResult sstep_solve(const ProblemInstance& p, const SStepOptions& opts);

// Exact extremal eigenvalues of a (small) operator, for fixed-basis runs that
// want Newton or Chebyshev parameters up front.
std::pair<double, double> exact_spectral_bounds(const SparseMatrix& a);

}  // namespace ascg
