#include "ascg/adaptive_cg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "monitor.hpp"
#include "sstep_engine.hpp"

namespace ascg {

std::string_view to_string(AdaptiveVariant v) { return v == AdaptiveVariant::Old ? "old" : "improved"; }

void AdaptiveConfig::validate() const {
  if (sigma == 0) throw ParameterError("adaptive: sigma must be positive");
  if (s_bar0 == 0 || s_bar0 > sigma) throw ParameterError("adaptive: need 1 <= s_bar0 <= sigma");
  if (!(eps_star > 0.0)) throw ParameterError("adaptive: eps_star must be positive");
  if (leja_grid < 2) throw ParameterError("adaptive: leja grid too small");
}

AdaptiveConfig old_variant_defaults(std::size_t sigma, double eps_star) {
  AdaptiveConfig cfg;
  cfg.sigma = sigma;
  cfg.eps_star = eps_star;
  cfg.basis_kind = BasisKind::Monomial;
  cfg.c_strategy = ritz::CStrategy::Unit;
  cfg.variant = AdaptiveVariant::Old;
  return cfg;
}

STildeSelection select_s_tilde(std::vector<double> conds, std::size_t s_bar, double c, double eps, double eps_star,
                               double r_norm) {
  if (s_bar == 0 || conds.size() < s_bar + 1) throw ParameterError("select_s_tilde: need s_bar + 1 estimates");
  STildeSelection sel;
  sel.bound = eps_star / (c * eps * r_norm);
  sel.s_tilde = 1;
  for (std::size_t i = s_bar; i >= 1; --i) {
    if (conds[i] <= sel.bound) {
      sel.s_tilde = i;
      break;
    }
  }
  sel.conds = std::move(conds);
  return sel;
}

STildeSelection select_s_tilde(const la::SmallSymMatrix& g, std::size_t s_bar, double c, double eps, double eps_star,
                               double r_norm) {
  if (g.order() != 2 * s_bar + 1) throw DimensionError("select_s_tilde: Gram order must be 2 s_bar + 1");
  return select_s_tilde(la::nested_condition_estimates(g, s_bar), s_bar, c, eps, eps_star, r_norm);
}

namespace {

// ||B||_2 of |B| via the eigenvalues of |B|^T |B|.
double abs_matrix_norm(const la::SmallMatrix& b) {
  const std::size_t m = b.order();
  la::SmallSymMatrix btb(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < m; ++l) acc += std::fabs(b(l, i)) * std::fabs(b(l, j));
      btb.set(i, j, acc);
    }
  const auto ev = la::sym_eig(btb);
  return std::sqrt(std::max(0.0, ev.back()));
}

ritz::BlockInfo block_info(const ProblemInstance& p, const SStepBlock& blk) {
  ritz::BlockInfo info;
  info.s = blk.s;
  info.n_a = p.a.n_a;
  info.nu = p.nu();
  info.tau = abs_matrix_norm(blk.b_mat) / p.norm_a;
  info.kappa = p.kappa_a;
  return info;
}

bool usable_bounds(const ritz::RitzState& rs) {
  return rs.steps() >= 2 && rs.lambda_min() > 0.0 && rs.lambda_min() < rs.lambda_max() &&
         std::isfinite(rs.lambda_max());
}

}  // namespace

SolveResult adaptive_solve(const ProblemInstance& p, const AdaptiveConfig& cfg) {
  cfg.validate();
  const std::size_t n = p.a.n;
  if (p.b.size() != n || p.x0.size() != n) throw DimensionError("adaptive_solve: problem dimensions disagree");
  const std::size_t max_outer = cfg.max_outer ? cfg.max_outer : 100 * n;
  const bool improved = cfg.variant == AdaptiveVariant::Improved;
  const double eps = kUnitRoundoff;

  SolveResult out;
  auto& tr = out.trace;
  detail::Monitor monitor(tr, cfg.stop, cfg.eps_star);

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
  if (r0 <= cfg.eps_star) {
    tr.status = SolveStatus::Converged;
    out.x = std::move(x);
    return out;
  }

  BasisParams params = make_params(cfg.basis_kind, cfg.sigma, cfg.initial_bounds, cfg.leja_grid);
  ritz::RitzState ritz;
  Vector xd(n), rd(n);
  std::size_t s_prev = 0;

  for (std::size_t k = 0; k < max_outer && tr.status == SolveStatus::Running; ++k) {
    const std::size_t s_bar = k == 0 ? cfg.s_bar0 : std::min(s_prev + cfg.growth(), cfg.sigma);
    const SStepBlock full = build_block(p.a, pdir, r, params, s_bar);
    if (full.breakdown) {
      tr.status = SolveStatus::Diverged;
      tr.failure = "basis breakdown";
      break;
    }
    std::optional<ritz::BlockInfo> info;
    if (cfg.c_strategy == ritz::CStrategy::FullBound) info = block_info(p, full);
    const double c_block = ritz::c_strategy(cfg.c_strategy, ritz, info);
    const double r_rel = la::norm2(r) / norm_b;
    const auto sel = select_s_tilde(full.cond_estimates, s_bar, c_block, eps, cfg.eps_star, r_rel);
    const SStepBlock blk = truncate_block(full, params, sel.s_tilde);

    OuterLoopRecord rec;
    rec.k = k;
    rec.start_iter = tr.total_iters;
    rec.s_bar = s_bar;
    rec.s_tilde = sel.s_tilde;
    rec.bound = sel.bound;
    rec.cond_used = sel.conds;
    rec.basis = params.kind;
    rec.thetas.assign(params.thetas.begin(), params.thetas.begin() + static_cast<long>(s_bar));
    rec.gammas.assign(params.gammas.begin(), params.gammas.begin() + static_cast<long>(s_bar));
    rec.mus.assign(params.mus.begin(), params.mus.begin() + static_cast<long>(s_bar - 1));
    tr.outer_marks.push_back(tr.total_iters);
    ++tr.total_outer;

    detail::CoordIteration it(blk);
    double phi = it.residual_estimate() / norm_b;
    rec.phi_start = phi;
    const double gamma_block = sel.conds[sel.s_tilde];
    SolveStatus status = SolveStatus::Running;
    for (std::size_t j = 0; j < sel.s_tilde; ++j) {
      if (!it.step()) {
        status = SolveStatus::Diverged;
        tr.failure = "nonpositive Gram curvature";
        break;
      }
      out.coefficients.alphas.push_back(it.alpha());
      out.coefficients.betas.push_back(it.beta());
      if (it.alpha() > 0.0 && it.beta() > 0.0 && std::isfinite(it.beta())) ritz.absorb_step(it.alpha(), it.beta());
      const double c_now = improved ? ritz::c_strategy(cfg.c_strategy, ritz, info) : c_block;

      const auto d = detail::diagnose(p, blk, it.coords(), x, norm_b, xd, rd, work);
      const double est = it.residual_estimate() / norm_b;
      status = monitor.record(d.true_rel, d.upd_rel, est, d.gap, ritz, c_now, k);
      if (status != SolveStatus::Running) break;

      if (est <= cfg.eps_star) {
        rec.estimate_exit = j + 1 < sel.s_tilde;
        break;
      }
      if (improved) {
        phi = std::max(phi, est);
        if (j + 1 < sel.s_tilde) {
          const double threshold = cfg.eps_star / (c_now * eps * phi);
          const double gamma = sel.conds[j + 2];
          if (gamma >= threshold) {
            rec.broke_early = true;
            rec.break_gamma = gamma;
            rec.break_threshold = threshold;
            break;
          }
        }
      } else {
        const double threshold = cfg.eps_star / (c_block * eps * est);
        if (gamma_block >= threshold) {
          rec.broke_early = j + 1 < sel.s_tilde;
          rec.break_gamma = gamma_block;
          rec.break_threshold = threshold;
          break;
        }
      }
    }
    rec.phi = phi;
    rec.s_actual = it.coords().j;
    tr.s_schedule.push_back(rec.s_actual);
    tr.outer_records.push_back(rec);
    s_prev = std::max<std::size_t>(rec.s_actual, 1);

    if (rec.s_actual > 0) {
      auto rv = recover_iterates(blk, it.coords(), x);
      x = std::move(rv.x);
      r = std::move(rv.r);
      pdir = std::move(rv.p);
    }
    if (status == SolveStatus::Running && rec.s_actual > 0 && tr.true_resid.back() <= cfg.eps_star)
      status = SolveStatus::Converged;
    tr.status = status;

    if (improved && cfg.basis_kind != BasisKind::Monomial && tr.total_iters > 1 && usable_bounds(ritz))
      params = make_params(cfg.basis_kind, cfg.sigma, std::make_pair(ritz.lambda_min(), ritz.lambda_max()),
                           cfg.leja_grid);
  }
  if (tr.status == SolveStatus::Running) tr.status = SolveStatus::MaxIterations;
  out.x = std::move(x);
  return out;
}

std::string format_cell(Outcome o, std::size_t outer, std::size_t total, double attained) {
  char buf[64];
  switch (o) {
    case Outcome::Converged:
      std::snprintf(buf, sizeof buf, "%zu (%zu)", outer, total);
      return buf;
    case Outcome::Stagnated:
      std::snprintf(buf, sizeof buf, "– [%.1e]", attained);
      return buf;
    case Outcome::Diverged:
      break;
  }
  return "–";
}

AccuracyReport attained_accuracy_report(const SolveTrace& trace) {
  AccuracyReport rep;
  rep.outer = trace.total_outer;
  rep.total = trace.total_iters;
  rep.attained = trace.final_true_resid;
  if (trace.converged())
    rep.outcome = Outcome::Converged;
  else if (trace.diverged())
    rep.outcome = Outcome::Diverged;
  else
    rep.outcome = Outcome::Stagnated;
  rep.cell = format_cell(rep.outcome, rep.outer, rep.total, rep.attained);
  return rep;
}

}  // namespace ascg
