#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ascg/common.hpp"

namespace ascg {

enum class BasisKind { Monomial, Newton, Chebyshev };

std::string_view to_string(BasisKind k);
BasisKind parse_basis_kind(std::string_view s);

enum class SolveStatus {
  Running,
  Converged,    // true relative residual <= eps_star
  Stagnated,    // no new minimum of the true residual within the window
  Diverged,     // residual blow-up, NaN, or a nonpositive Gram/curvature form
  MaxIterations
};

std::string_view to_string(SolveStatus s);

struct CgCoefficients {
  std::vector<double> alphas;
  std::vector<double> betas;
};

// Per-block bookkeeping for the s-step solvers.
struct OuterLoopRecord {
  std::size_t k = 0;
  std::size_t start_iter = 0;   // global iteration index at block start
  std::size_t s_bar = 0;
  std::size_t s_tilde = 0;
  std::size_t s_actual = 0;
  double phi_start = 0.0;       // Gram-estimated residual at block start
  double phi = 0.0;             // running max of the Gram-estimated residual
  double bound = 0.0;           // eps*/(c eps ||r_m||) used to pick s_tilde
  std::vector<double> cond_used;  // kappa(Y_{k,i}), i = 0..s_bar (entry 0 unused)
  BasisKind basis = BasisKind::Monomial;
  std::vector<double> thetas, gammas, mus;
  bool broke_early = false;     // inner loop left by the condition test
  double break_gamma = 0.0;
  double break_threshold = 0.0;
  bool estimate_exit = false;   // left because the Gram residual estimate reached eps*
};

struct SolveTrace {
  // One entry per global iteration (index i holds the state after iteration i+1).
  std::vector<double> true_resid;   // ||b - A x_i|| / ||b||
  std::vector<double> upd_resid;    // ||r_i|| / ||b||
  std::vector<double> est_resid;    // residual norm the solver itself sees (Gram form for s-step) / ||b||
  std::vector<double> resid_gap;    // ||(b - A x_i) - r_i||
  std::vector<double> c_values;
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
  std::vector<double> psi;
  std::vector<std::size_t> outer_of_iter;

  std::vector<std::size_t> outer_marks;   // global iteration index where each block starts
  std::vector<std::size_t> s_schedule;    // inner steps actually taken per block
  std::vector<OuterLoopRecord> outer_records;

  SolveStatus status = SolveStatus::Running;
  std::size_t total_iters = 0;
  std::size_t total_outer = 0;
  double eps_star = 0.0;
  double final_true_resid = 0.0;
  double min_true_resid = 0.0;
  std::string failure;              // reason text for Diverged outcomes

  bool converged() const { return status == SolveStatus::Converged; }
  bool stagnated() const { return status == SolveStatus::Stagnated || status == SolveStatus::MaxIterations; }
  bool diverged() const { return status == SolveStatus::Diverged; }
};

struct SolveResult {
  Vector x;
  SolveTrace trace;
  CgCoefficients coefficients;
};

// Shared stopping rules.
struct StopRules {
  std::size_t stagnation_window = 200;
  double divergence_threshold = 1e5;
};

}  // namespace ascg
