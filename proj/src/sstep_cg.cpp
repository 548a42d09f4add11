#include "ascg/sstep_cg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ascg/ritz.hpp"
#include "monitor.hpp"
#include "sstep_engine.hpp"

namespace ascg {

CoordState CoordState::initial(std::size_t s) {
  CoordState c;
  c.xp.assign(2 * s + 1, 0.0);
  c.rp.assign(2 * s + 1, 0.0);
  c.pp.assign(2 * s + 1, 0.0);
  c.pp[0] = 1.0;
  c.rp[s + 1] = 1.0;
  return c;
}

RecoveredIterates recover_iterates(const SStepBlock& block, const CoordState& coords, std::span<const double> x_base) {
  const std::size_t m = block.y.cols();
  if (coords.xp.size() != m || coords.rp.size() != m || coords.pp.size() != m)
    throw DimensionError("recover_iterates: coordinate length must be 2s+1");
  if (x_base.size() != block.y.rows()) throw DimensionError("recover_iterates: x_base length mismatch");
  RecoveredIterates out;
  out.x.resize(block.y.rows());
  out.r.resize(block.y.rows());
  out.p.resize(block.y.rows());
  la::combine(block.y, coords.xp, out.x);
  for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += x_base[i];
  la::combine(block.y, coords.rp, out.r);
  la::combine(block.y, coords.pp, out.p);
  return out;
}

std::pair<double, double> exact_spectral_bounds(const SparseMatrix& a) {
  const auto dense = to_dense(a);
  Eigen::MatrixXd m(a.n, a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) m(i, j) = dense[i * a.n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("exact_spectral_bounds: eigensolver failed", 0.0);
  return {es.eigenvalues()(0), es.eigenvalues()(a.n - 1)};
}

SolveResult sstep_solve(const ProblemInstance& p, const SStepOptions& opts) {
  const std::size_t n = p.a.n;
  if (opts.s == 0) throw ParameterError("sstep_solve: s must be positive");
  if (p.b.size() != n || p.x0.size() != n) throw DimensionError("sstep_solve: problem dimensions disagree");
  if (!(opts.eps_star >= 0.0)) throw ParameterError("sstep_solve: eps_star must be nonnegative");
  const std::size_t max_outer = opts.max_outer ? opts.max_outer : 100 * n / opts.s + 1;

  SolveResult out;
  auto& tr = out.trace;
  detail::Monitor monitor(tr, opts.stop, opts.eps_star);

  Vector x = p.x0, r(n), work(n);
  la::spmv(p.a, x, work);
  for (std::size_t i = 0; i < n; ++i) r[i] = p.b[i] - work[i];
  Vector pdir = r;
  const double norm_b = la::norm2(p.b);
  if (norm_b == 0.0) {
    out.x.assign(n, 0.0);
    tr.status = SolveStatus::Converged;
    return out;
  }
  const double r0 = la::norm2(r) / norm_b;
  monitor.seed_initial(r0);
  if (r0 <= opts.eps_star) {
    tr.status = SolveStatus::Converged;
    out.x = std::move(x);
    return out;
  }

  const BasisParams params = make_params(opts.basis, opts.s, opts.spectral_bounds, opts.leja_grid);
  ritz::RitzState ritz;
  Vector xd(n), rd(n);

  for (std::size_t k = 0; k < max_outer && tr.status == SolveStatus::Running; ++k) {
    const SStepBlock blk = build_block(p.a, pdir, r, params, opts.s, {.compute_conditions = false});
    if (blk.breakdown) {
      tr.status = SolveStatus::Diverged;
      tr.failure = "basis breakdown";
      break;
    }
    OuterLoopRecord rec;
    rec.k = k;
    rec.start_iter = tr.total_iters;
    rec.s_bar = rec.s_tilde = opts.s;
    rec.basis = params.kind;
    rec.thetas = params.thetas;
    rec.gammas = params.gammas;
    rec.mus = params.mus;
    tr.outer_marks.push_back(tr.total_iters);
    ++tr.total_outer;

    detail::CoordIteration it(blk);
    SolveStatus status = SolveStatus::Running;
    for (std::size_t j = 0; j < opts.s; ++j) {
      if (!it.step()) {
        status = SolveStatus::Diverged;
        tr.failure = "nonpositive Gram curvature";
        break;
      }
      out.coefficients.alphas.push_back(it.alpha());
      out.coefficients.betas.push_back(it.beta());
      if (it.alpha() > 0.0 && it.beta() > 0.0 && std::isfinite(it.beta())) ritz.absorb_step(it.alpha(), it.beta());
      const auto d = detail::diagnose(p, blk, it.coords(), x, norm_b, xd, rd, work);
      status = monitor.record(d.true_rel, d.upd_rel, it.residual_estimate() / norm_b, d.gap, ritz, ritz.current_c(), k);
      if (status != SolveStatus::Running) break;
      if (it.residual_estimate() / norm_b <= opts.eps_star) {
        rec.estimate_exit = j + 1 < opts.s;
        break;
      }
    }
    rec.s_actual = it.coords().j;
    tr.s_schedule.push_back(rec.s_actual);
    tr.outer_records.push_back(rec);

    if (rec.s_actual > 0) {
      auto rv = recover_iterates(blk, it.coords(), x);
      x = std::move(rv.x);
      r = std::move(rv.r);
      pdir = std::move(rv.p);
    }
    if (status == SolveStatus::Running && rec.s_actual > 0 && tr.true_resid.back() <= opts.eps_star)
      status = SolveStatus::Converged;
    tr.status = status;
  }
  if (tr.status == SolveStatus::Running) tr.status = SolveStatus::MaxIterations;
  out.x = std::move(x);
  return out;
}

}  // namespace ascg
