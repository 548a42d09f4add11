#pragma once

#include <cmath>
#include <limits>

#include "ascg/ritz.hpp"
#include "ascg/trace.hpp"

namespace ascg::detail {

// Appends per-iteration diagnostics to a trace and applies the shared
// stagnation and divergence rules.
class Monitor {
 public:
  Monitor(SolveTrace& trace, const StopRules& rules, double eps_star) : trace_(trace), rules_(rules) {
    trace_.eps_star = eps_star;
    trace_.min_true_resid = std::numeric_limits<double>::infinity();
  }

  SolveStatus record(double true_rel, double upd_rel, double est_rel, double gap, const ritz::RitzState& ritz,
                     double c, std::size_t outer) {
    trace_.true_resid.push_back(true_rel);
    trace_.upd_resid.push_back(upd_rel);
    trace_.est_resid.push_back(est_rel);
    trace_.resid_gap.push_back(gap);
    trace_.lambda_min.push_back(ritz.lambda_min());
    trace_.lambda_max.push_back(ritz.lambda_max());
    trace_.psi.push_back(ritz.psi());
    trace_.c_values.push_back(c);
    trace_.outer_of_iter.push_back(outer);
    ++trace_.total_iters;
    trace_.final_true_resid = true_rel;

    if (!std::isfinite(true_rel) || true_rel > rules_.divergence_threshold) {
      trace_.failure = "residual diverged";
      return SolveStatus::Diverged;
    }
    if (true_rel < trace_.min_true_resid) {
      trace_.min_true_resid = true_rel;
      since_min_ = 0;
    } else if (++since_min_ >= rules_.stagnation_window) {
      return SolveStatus::Stagnated;
    }
    return SolveStatus::Running;
  }

  void seed_initial(double true_rel) {
    trace_.min_true_resid = true_rel;
    trace_.final_true_resid = true_rel;
  }

 private:
  SolveTrace& trace_;
  StopRules rules_;
  std::size_t since_min_ = 0;
};

}  // namespace ascg::detail
