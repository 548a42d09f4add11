#pragma once

#include <cstddef>

#include "ascg/matio.hpp"
#include "ascg/small_dense.hpp"
#include "ascg/trace.hpp"

namespace ascg {

struct HscgOptions {
  double eps_star = 1e-6;
  std::size_t max_iters = 0;  // 0 selects 100 * n
  StopRules stop;
};

// Hestenes-Stiefel CG. The true residual is evaluated every iteration and
// drives the stopping test; the trace also records the recursively updated
// residual, the residual gap, and the incremental Ritz estimates.
SolveResult hscg_solve(const ProblemInstance& p, const HscgOptions& opts);

// Lanczos tridiagonal T_i assembled from the first i CG coefficients.
la::SmallSymMatrix assemble_tridiag(const CgCoefficients& c, std::size_t i);

// Smallest relative true residual HSCG reaches before it stagnates.
double hscg_attainable_accuracy(const ProblemInstance& p, std::size_t max_iters = 0, const StopRules& stop = {});

}  // namespace ascg
