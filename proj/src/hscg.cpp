#include "ascg/hscg.hpp"

#include <cmath>

#include "ascg/kernels.hpp"
#include "ascg/ritz.hpp"
#include "monitor.hpp"

namespace ascg {

namespace {

// Relative true residual and gap ||(b - A x) - r|| for the current iterate.
struct TrueResidual {
  double rel = 0.0;
  double gap = 0.0;
};

TrueResidual true_residual(const ProblemInstance& p, const Vector& x, const Vector& r, Vector& work,
                           double norm_b) {
  la::spmv(p.a, x, work);
  double tt = 0.0, gg = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double t = p.b[i] - work[i];
    tt += t * t;
    gg += (t - r[i]) * (t - r[i]);
  }
  return {std::sqrt(tt) / norm_b, std::sqrt(gg)};
}

}  // namespace

SolveResult hscg_solve(const ProblemInstance& p, const HscgOptions& opts) {
  const std::size_t n = p.a.n;
  if (p.b.size() != n || p.x0.size() != n) throw DimensionError("hscg_solve: problem dimensions disagree");
  if (!(opts.eps_star >= 0.0)) throw ParameterError("hscg_solve: eps_star must be nonnegative");
  const std::size_t max_iters = opts.max_iters ? opts.max_iters : 100 * n;

  SolveResult out;
  auto& tr = out.trace;
  detail::Monitor monitor(tr, opts.stop, opts.eps_star);

  Vector x = p.x0, r(n), w(n), work(n);
  la::spmv(p.a, x, w);
  for (std::size_t i = 0; i < n; ++i) r[i] = p.b[i] - w[i];
  Vector pdir = r;

  const double norm_b = la::norm2(p.b);
  if (norm_b == 0.0) {
    out.x.assign(n, 0.0);
    tr.status = SolveStatus::Converged;
    return out;
  }
  double rr = la::dot(r, r);
  monitor.seed_initial(std::sqrt(rr) / norm_b);
  if (std::sqrt(rr) / norm_b <= opts.eps_star) {
    tr.status = SolveStatus::Converged;
    out.x = std::move(x);
    return out;
  }

  ritz::RitzState ritz;
  tr.outer_marks.reserve(max_iters);
  for (std::size_t it = 0; it < max_iters; ++it) {
    tr.outer_marks.push_back(it);
    tr.s_schedule.push_back(1);
    ++tr.total_outer;

    la::spmv(p.a, pdir, w);
    const double pap = la::dot(pdir, w);
    if (!(pap > 0.0) || !std::isfinite(pap)) {
      tr.status = SolveStatus::Diverged;
      tr.failure = "nonpositive curvature p^T A p";
      --tr.total_outer;
      tr.outer_marks.pop_back();
      tr.s_schedule.pop_back();
      break;
    }
    const double alpha = rr / pap;
    la::axpy(alpha, pdir, x);
    la::axpy(-alpha, w, r);
    const double rr_next = la::dot(r, r);
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) pdir[i] = r[i] + beta * pdir[i];
    rr = rr_next;
    out.coefficients.alphas.push_back(alpha);
    out.coefficients.betas.push_back(beta);
    if (beta > 0.0) ritz.absorb_step(alpha, beta);

    const auto t = true_residual(p, x, r, work, norm_b);
    const double upd = std::sqrt(rr) / norm_b;
    auto status = monitor.record(t.rel, upd, upd, t.gap, ritz, ritz.current_c(), it);
    if (t.rel <= opts.eps_star) status = SolveStatus::Converged;
    if (status != SolveStatus::Running) {
      tr.status = status;
      break;
    }
  }
  if (tr.status == SolveStatus::Running) tr.status = SolveStatus::MaxIterations;
  out.x = std::move(x);
  return out;
}

la::SmallSymMatrix assemble_tridiag(const CgCoefficients& c, std::size_t i) {
  if (i == 0) throw ParameterError("assemble_tridiag: order must be positive");
  if (i > c.alphas.size() || (i > 1 && i - 1 > c.betas.size()))
    throw ParameterError("assemble_tridiag: not enough coefficients");
  la::SmallSymMatrix t(i);
  t.set(0, 0, 1.0 / c.alphas[0]);
  for (std::size_t l = 1; l < i; ++l) {
    t.set(l, l, 1.0 / c.alphas[l] + c.betas[l - 1] / c.alphas[l - 1]);
    t.set(l - 1, l, std::sqrt(c.betas[l - 1]) / c.alphas[l - 1]);
  }
  return t;
}

double hscg_attainable_accuracy(const ProblemInstance& p, std::size_t max_iters, const StopRules& stop) {
  HscgOptions opts;
  opts.eps_star = 0.0;
  opts.max_iters = max_iters;
  opts.stop = stop;
  const auto res = hscg_solve(p, opts);
  return res.trace.min_true_resid;
}

}  // namespace ascg
