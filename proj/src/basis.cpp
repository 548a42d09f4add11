#include "ascg/basis.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ascg {

BasisParams monomial_params(std::size_t s) {
  if (s == 0) throw ParameterError("monomial_params: s must be positive");
  BasisParams bp;
  bp.kind = BasisKind::Monomial;
  bp.thetas.assign(s, 0.0);
  bp.gammas.assign(s, 1.0);
  bp.mus.assign(s - 1, 0.0);
  return bp;
}

BasisParams newton_params(double lmin, double lmax, std::size_t s, std::size_t grid_points) {
  if (s == 0) throw ParameterError("newton_params: s must be positive");
  if (!(lmin >= 0.0) || !(lmin < lmax) || !std::isfinite(lmax))
    throw ParameterError("newton_params: need 0 <= lmin < lmax");
  if (grid_points < 2) throw ParameterError("newton_params: grid needs at least two points");

  BasisParams bp;
  bp.kind = BasisKind::Newton;
  bp.generated_from = std::make_pair(lmin, lmax);
  bp.gammas.assign(s, 1.0);
  bp.mus.assign(s - 1, 0.0);
  bp.thetas.push_back(lmax);
  if (s >= 2) bp.thetas.push_back(lmin);
  if (s <= 2) return bp;

  const double h = (lmax - lmin) / static_cast<double>(grid_points - 1);
  std::vector<double> grid(grid_points), objective(grid_points, 0.0);
  for (std::size_t k = 0; k < grid_points; ++k) grid[k] = lmin + static_cast<double>(k) * h;
  grid.back() = lmax;

  // objective[k] = sum_m log|grid[k] - theta_m|, extended one shift at a time.
  const auto add_shift = [&](double theta) {
    for (std::size_t k = 0; k < grid_points; ++k) objective[k] += std::log(std::fabs(grid[k] - theta));
  };
  add_shift(bp.thetas[0]);
  add_shift(bp.thetas[1]);
  for (std::size_t l = 2; l < s; ++l) {
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid_points; ++k) {
      // Values within rounding noise of the incumbent count as ties.
      const double slack = 1e-13 * std::max(1.0, std::fabs(best_val));
      if (objective[k] > best_val + (std::isfinite(best_val) ? slack : 0.0)) {
        best_val = objective[k];
        best = k;
      }
    }
    bp.thetas.push_back(grid[best]);
    add_shift(grid[best]);
  }
  return bp;
}

BasisParams chebyshev_params(double lmin, double lmax, std::size_t s) {
  if (s == 0) throw ParameterError("chebyshev_params: s must be positive");
  if (!(lmin > 0.0) || !(lmin < lmax)) throw ParameterError("chebyshev_params: need 0 < lmin < lmax");
  const double width = lmax - lmin;
  BasisParams bp;
  bp.kind = BasisKind::Chebyshev;
  bp.generated_from = std::make_pair(lmin, lmax);
  bp.thetas.assign(s, (lmin + lmax) / 2.0);
  bp.mus.assign(s - 1, 2.0 * width);
  bp.gammas.assign(s, width / 2.0);
  bp.gammas[0] = width;
  return bp;
}

BasisParams make_params(BasisKind kind, std::size_t s, std::optional<std::pair<double, double>> bounds,
                        std::size_t grid_points) {
  const bool usable = bounds && bounds->first > 0.0 && bounds->first < bounds->second &&
                      std::isfinite(bounds->second);
  if (kind == BasisKind::Monomial || !usable) return monomial_params(s);
  if (kind == BasisKind::Newton) return newton_params(bounds->first, bounds->second, s, grid_points);
  return chebyshev_params(bounds->first, bounds->second, s);
}

la::SmallMatrix change_of_basis(const BasisParams& params, std::size_t s) {
  if (params.degree() < s) throw ParameterError("change_of_basis: parameters do not cover degree s");
  la::SmallMatrix b(2 * s + 1);
  // Block of order m at offset `off`; its last column stays zero.
  const auto fill = [&](std::size_t off, std::size_t m) {
    for (std::size_t l = 0; l + 1 < m; ++l) {
      b(off + l, off + l) = params.thetas[l];
      b(off + l + 1, off + l) = params.gammas[l];
      if (l >= 1) b(off + l - 1, off + l) = params.mus[l - 1];
    }
  };
  fill(0, s + 1);
  fill(s + 1, s);
  return b;
}

namespace {

// Writes columns 1..count-1 of a polynomial basis into y starting at column off.
void fill_chain(const SparseMatrix& a, const BasisParams& params, la::DenseBlock& y, std::size_t off,
                std::size_t count) {
  for (std::size_t l = 1; l < count; ++l) {
    auto prev = y.col(off + l - 1);
    auto cur = y.col(off + l);
    la::spmv(a, prev, cur);
    const double theta = params.thetas[l - 1];
    const double gamma = params.gammas[l - 1];
    if (l >= 2) {
      const double mu = params.mus[l - 2];
      auto prev2 = y.col(off + l - 2);
      for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = (cur[i] - theta * prev[i] - mu * prev2[i]) / gamma;
    } else {
      for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = (cur[i] - theta * prev[i]) / gamma;
    }
  }
}

bool gram_diagonal_ok(const la::SmallSymMatrix& g) {
  for (std::size_t i = 0; i < g.order(); ++i)
    if (!(g(i, i) > 0.0) || !std::isfinite(g(i, i))) return false;
  return true;
}

}  // namespace

SStepBlock build_block(const SparseMatrix& a, std::span<const double> p, std::span<const double> r,
                       const BasisParams& params, std::size_t s, const BlockOptions& opts) {
  if (s == 0) throw ParameterError("build_block: s must be positive");
  if (p.size() != a.n || r.size() != a.n) throw DimensionError("build_block: vector length mismatch");
  if (params.degree() < s) throw ParameterError("build_block: parameters do not cover degree s");

  SStepBlock blk;
  blk.s = s;
  blk.y = la::DenseBlock(a.n, 2 * s + 1);
  std::copy(p.begin(), p.end(), blk.y.col(0).begin());
  std::copy(r.begin(), r.end(), blk.y.col(s + 1).begin());
  fill_chain(a, params, blk.y, 0, s + 1);
  fill_chain(a, params, blk.y, s + 1, s);

  blk.b_mat = change_of_basis(params, s);
  blk.g = la::gram(blk.y);
  blk.breakdown = !gram_diagonal_ok(blk.g);
  if (opts.compute_conditions && !blk.breakdown) blk.cond_estimates = la::nested_condition_estimates(blk.g, s);
  return blk;
}

SStepBlock truncate_block(const SStepBlock& block, const BasisParams& params, std::size_t s) {
  if (s == 0 || s > block.s) throw ParameterError("truncate_block: invalid size");
  if (s == block.s) return block;
  const auto cols = la::sub_basis_columns(block.s, s);
  SStepBlock out;
  out.s = s;
  out.y = block.y.select(cols);
  out.g = block.g.principal(cols);
  out.b_mat = change_of_basis(params, s);
  if (!block.cond_estimates.empty())
    out.cond_estimates.assign(block.cond_estimates.begin(), block.cond_estimates.begin() + static_cast<long>(s) + 1);
  out.breakdown = !gram_diagonal_ok(out.g);
  return out;
}

}  // namespace ascg
