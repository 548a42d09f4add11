#pragma once

#include <cmath>

#include "ascg/kernels.hpp"
#include "ascg/sstep_cg.hpp"

namespace ascg::detail {

// Inner-loop recurrences of s-step CG carried out on basis coordinates.
class CoordIteration {
 public:
  explicit CoordIteration(const SStepBlock& blk) : blk_(blk), c_(CoordState::initial(blk.s)) {
    rr_ = blk_.g.quadratic(c_.rp);
  }

  // One CG step. Returns false when p'^T G B p' is not a positive finite number.
  bool step() {
    const Vector bp = blk_.b_mat.apply(c_.pp);
    const double curvature = blk_.g.bilinear(c_.pp, bp);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) return false;
    alpha_ = rr_ / curvature;
    for (std::size_t i = 0; i < c_.xp.size(); ++i) {
      c_.xp[i] += alpha_ * c_.pp[i];
      c_.rp[i] -= alpha_ * bp[i];
    }
    const double rr_next = blk_.g.quadratic(c_.rp);
    beta_ = rr_next / rr_;
    for (std::size_t i = 0; i < c_.pp.size(); ++i) c_.pp[i] = c_.rp[i] + beta_ * c_.pp[i];
    rr_ = rr_next;
    ++c_.j;
    return true;
  }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  // Gram estimate of ||r||, clamped at zero when roundoff makes the form negative.
  double residual_estimate() const { return std::sqrt(std::max(0.0, rr_)); }
  const CoordState& coords() const { return c_; }

 private:
  const SStepBlock& blk_;
  CoordState c_;
  double rr_ = 0.0, alpha_ = 0.0, beta_ = 0.0;
};

// x = x_base + Y x' and r = Y r', with the true residual derived from them.
struct IterateDiagnostics {
  double true_rel = 0.0;
  double upd_rel = 0.0;
  double gap = 0.0;
};

inline IterateDiagnostics diagnose(const ProblemInstance& p, const SStepBlock& blk, const CoordState& c,
                                   std::span<const double> x_base, double norm_b, Vector& x, Vector& r,
                                   Vector& work) {
  la::combine(blk.y, c.xp, x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += x_base[i];
  la::combine(blk.y, c.rp, r);
  la::spmv(p.a, x, work);
  double tt = 0.0, gg = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = p.b[i] - work[i];
    tt += t * t;
    gg += (t - r[i]) * (t - r[i]);
    rr += r[i] * r[i];
  }
  return {std::sqrt(tt) / norm_b, std::sqrt(rr) / norm_b, std::sqrt(gg)};
}

}  // namespace ascg::detail
