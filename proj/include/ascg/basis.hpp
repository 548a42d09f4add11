#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ascg/kernels.hpp"
#include "ascg/small_dense.hpp"
#include "ascg/sparse_matrix.hpp"
#include "ascg/trace.hpp"

namespace ascg {

// Coefficients of the three-term recurrence
//   rho_0 = 1, rho_1 = (z - theta_0) rho_0 / gamma_0,
//   rho_l = ((z - theta_{l-1}) rho_{l-1} - mu_{l-2} rho_{l-2}) / gamma_{l-1}.
// Degree-s bases use s entries of thetas/gammas and s-1 entries of mus.
struct BasisParams {
  BasisKind kind = BasisKind::Monomial;
  std::vector<double> thetas;
  std::vector<double> gammas;
  std::vector<double> mus;
  std::optional<std::pair<double, double>> generated_from;  // (lambda_min, lambda_max)

  std::size_t degree() const { return thetas.size(); }
};

BasisParams monomial_params(std::size_t s);

// Leja-ordered Newton shifts on [lmin, lmax]: lmax, lmin, then each next
// shift maximizes the product of distances to the previous ones over a
// uniform grid (ties go to the smaller point).
BasisParams newton_params(double lmin, double lmax, std::size_t s, std::size_t grid_points = 10000);

BasisParams chebyshev_params(double lmin, double lmax, std::size_t s);

// Parameters of the requested kind for spectral bounds; falls back to the
// monomial basis when the bounds are missing or degenerate.
BasisParams make_params(BasisKind kind, std::size_t s, std::optional<std::pair<double, double>> bounds,
                        std::size_t grid_points = 10000);

// Change-of-basis matrix for a basis of size s: blockdiag(B_{s+1}, B_s),
// order 2s+1, last column of each block zero.
la::SmallMatrix change_of_basis(const BasisParams& params, std::size_t s);

// One outer loop's worth of s-step data.
struct SStepBlock {
  std::size_t s = 0;
  la::DenseBlock y;              // [P | R], n x (2s+1)
  la::SmallMatrix b_mat;         // A * Y_underline = Y * B
  la::SmallSymMatrix g;          // Y^T Y
  std::vector<double> cond_estimates;  // kappa(Y_{k,i}) for i = 0..s (entry 0 unused)
  bool breakdown = false;        // zero or non-finite basis column
};

struct BlockOptions {
  bool compute_conditions = true;
};

SStepBlock build_block(const SparseMatrix& a, std::span<const double> p, std::span<const double> r,
                       const BasisParams& params, std::size_t s, const BlockOptions& opts = {});

// Restricts a block built for s_bar to its leading sub-basis of size s.
SStepBlock truncate_block(const SStepBlock& block, const BasisParams& params, std::size_t s);

}  // namespace ascg
