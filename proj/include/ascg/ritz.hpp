#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "ascg/common.hpp"

// Incremental estimates of the extremal Ritz values of the Lanczos matrix
// T_i = L_i L_i^T built from CG coefficients, where L_i^T is upper bidiagonal
// with diagonal zeta_l = 1/sqrt(alpha_l) and superdiagonal
// eta_l = sqrt(beta_l / alpha_l).
namespace ascg::ritz {

// Incremental estimate of ||L_i||^2 = lambda_max(T_i).
class LmaxEstimator {
 public:
  // Takes zeta_i^2 and the eta_{i-1}^2 linking it to the previous column.
  void absorb(double zeta_sq, double eta_prev_sq);

  bool initialized() const { return count_ > 0; }
  std::size_t count() const { return count_; }
  double omega() const { return omega_; }

 private:
  double omega_ = 0.0;
  double h_ = 1.0;
  double last_zeta_sq_ = 0.0;
  std::size_t count_ = 0;
};

// Incremental estimate of ||L_i^{-1}||^2 = 1/lambda_min(T_i).
class LminEstimator {
 public:
  void absorb(double zeta_sq, double eta_prev_sq);

  bool initialized() const { return count_ > 0; }
  std::size_t count() const { return count_; }
  double omega() const { return omega_; }

 private:
  double omega_ = 0.0;
  double a_ = 0.0, d_ = 0.0, g_ = 0.0, h_ = 1.0;
  std::size_t count_ = 0;
};

// Initial error-ratio constant before any Ritz information exists.
inline double initial_c() { return 1.0 / std::sqrt(kUnitRoundoff); }

// max{1, lambda_max * sqrt(psi / lambda_min)}
double adaptive_c(double lambda_max, double lambda_min, double psi);

// Estimator state carried through one solve.
class RitzState {
 public:
  // Feeds alpha_i and beta_i of global iteration i. Throws ParameterError
  // when either coefficient is nonpositive (CG breakdown).
  void absorb_step(double alpha, double beta);

  std::size_t steps() const { return steps_; }
  double lambda_max() const { return lambda_max_; }
  double lambda_min() const { return lambda_min_; }
  double psi() const { return psi_; }

  // epsilon^{-1/2} until two steps are absorbed, then
  // max{1, lambda_max * sqrt(psi / lambda_min)}.
  double current_c() const { return c_; }

 private:
  LmaxEstimator lmax_;
  LminEstimator lmin_;
  std::optional<double> pending_eta_sq_;
  double lambda_max_ = 0.0, lambda_min_ = 0.0;
  double psi_ = 1.0;
  double c_ = initial_c();
  std::size_t steps_ = 0;
};

enum class CStrategy { Adaptive, Unit, KappaEstimate, FullBound };

std::string_view to_string(CStrategy c);
CStrategy parse_c_strategy(std::string_view s);

// Inputs of the rounding-error constant
// c = 2s (2(3+N_A) nu t + (6+8t) tau + 2t^3 + 3) kappa(A), t = sqrt(2s+1).
struct BlockInfo {
  std::size_t s = 1;
  std::size_t n_a = 1;
  double nu = 1.0;
  double tau = 1.0;
  double kappa = 1.0;
};

double full_bound_constant(const BlockInfo& info);

// c for the selected strategy. FullBound requires `block`.
double c_strategy(CStrategy kind, const RitzState& state, const std::optional<BlockInfo>& block = std::nullopt);

}  // namespace ascg::ritz
