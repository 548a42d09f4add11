#include "ascg/ritz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ascg::ritz {

namespace {

// (1 - delta/chi)/2 for chi = sqrt(delta^2 + 4 q), q >= 0, without cancelling
// when delta > 0.
double half_gap(double delta, double chi, double q) {
  if (!(chi > 0.0)) return 0.0;
  return delta > 0.0 ? 2.0 * q / (chi * (chi + delta)) : 0.5 * (1.0 - delta / chi);
}

}  // namespace

void LmaxEstimator::absorb(double zeta_sq, double eta_prev_sq) {
  if (count_ == 0) {
    omega_ = zeta_sq;
    h_ = 1.0;
  } else {
    const double d = last_zeta_sq_ * eta_prev_sq * h_;
    const double delta = omega_ - (eta_prev_sq + zeta_sq);
    const double chi = std::sqrt(delta * delta + 4.0 * d);
    const double h = half_gap(delta, chi, d);
    omega_ += chi * h;
    h_ = h;
  }
  last_zeta_sq_ = zeta_sq;
  ++count_;
}

void LminEstimator::absorb(double zeta_sq, double eta_prev_sq) {
  if (count_ == 0) {
    omega_ = 1.0 / zeta_sq;
    a_ = omega_;
    d_ = 0.0;
    g_ = 0.0;
    h_ = 1.0;
  } else {
    const double d = -std::sqrt(eta_prev_sq / zeta_sq) * (g_ * d_ + h_ * a_);
    const double a = (eta_prev_sq * a_ + 1.0) / zeta_sq;
    const double delta = omega_ - a;
    const double chi = std::sqrt(delta * delta + 4.0 * d * d);
    const double h2 = half_gap(delta, chi, d * d);
    omega_ += chi * h2;
    g_ = std::sqrt(std::max(0.0, 1.0 - h2));
    h_ = std::copysign(std::sqrt(h2), d);
    d_ = d;
    a_ = a;
  }
  ++count_;
}

void RitzState::absorb_step(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("absorb_step: nonpositive alpha");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("absorb_step: nonpositive beta");

  const double zeta_sq = 1.0 / alpha;
  const double eta_prev_sq = pending_eta_sq_.value_or(0.0);
  lmax_.absorb(zeta_sq, eta_prev_sq);
  lmin_.absorb(zeta_sq, eta_prev_sq);
  pending_eta_sq_ = beta / alpha;

  lambda_max_ = lmax_.omega();
  lambda_min_ = 1.0 / lmin_.omega();
  psi_ = psi_ / (psi_ + beta);
  ++steps_;
  if (steps_ >= 2) c_ = adaptive_c(lambda_max_, lambda_min_, psi_);
}

double adaptive_c(double lambda_max, double lambda_min, double psi) {
  return std::max(1.0, lambda_max * std::sqrt(psi / lambda_min));
}

std::string_view to_string(CStrategy c) {
  switch (c) {
    case CStrategy::Adaptive: return "adaptive";
    case CStrategy::Unit: return "unit";
    case CStrategy::KappaEstimate: return "kappa";
    case CStrategy::FullBound: return "full";
  }
  return "?";
}

CStrategy parse_c_strategy(std::string_view s) {
  if (s == "adaptive" || s == "xi") return CStrategy::Adaptive;
  if (s == "unit" || s == "1") return CStrategy::Unit;
  if (s == "kappa" || s == "kappa-estimate") return CStrategy::KappaEstimate;
  if (s == "full" || s == "full-bound") return CStrategy::FullBound;
  throw ParameterError("unknown c strategy '" + std::string(s) + "'");
}

double full_bound_constant(const BlockInfo& info) {
  const double s = static_cast<double>(info.s);
  const double t = std::sqrt(2.0 * s + 1.0);
  const double na = static_cast<double>(info.n_a);
  return 2.0 * s * (2.0 * (3.0 + na) * info.nu * t + (6.0 + 8.0 * t) * info.tau + 2.0 * t * t * t + 3.0) *
         info.kappa;
}

double c_strategy(CStrategy kind, const RitzState& state, const std::optional<BlockInfo>& block) {
  switch (kind) {
    case CStrategy::Adaptive:
      return state.current_c();
    case CStrategy::Unit:
      return 1.0;
    case CStrategy::KappaEstimate:
      return state.steps() >= 2 ? state.lambda_max() / state.lambda_min() : initial_c();
    case CStrategy::FullBound:
      if (!block) throw ParameterError("c_strategy: FullBound needs block information");
      return full_bound_constant(*block);
  }
  return 1.0;
}

}  // namespace ascg::ritz
