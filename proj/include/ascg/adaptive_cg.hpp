#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ascg/basis.hpp"
#include "ascg/matio.hpp"
#include "ascg/ritz.hpp"
#include "ascg/trace.hpp"

namespace ascg {

enum class AdaptiveVariant { Old, Improved };

std::string_view to_string(AdaptiveVariant v);

struct AdaptiveConfig {
  std::size_t sigma = 10;
  std::size_t s_bar0 = 1;
  std::optional<std::size_t> f;  // growth limit, defaults to sigma
  double eps_star = 1e-6;
  BasisKind basis_kind = BasisKind::Newton;
  ritz::CStrategy c_strategy = ritz::CStrategy::Adaptive;
  AdaptiveVariant variant = AdaptiveVariant::Improved;
  std::size_t max_outer = 0;  // 0 selects 100 * n
  std::size_t leja_grid = 10000;
  // Bounds used before (Improved) or instead of (Old) the Ritz estimates.
  std::optional<std::pair<double, double>> initial_bounds;
  StopRules stop;

  void validate() const;
  std::size_t growth() const { return f.value_or(sigma); }
};

// Old variant with the monomial basis and c = 1.
AdaptiveConfig old_variant_defaults(std::size_t sigma, double eps_star);

struct STildeSelection {
  std::size_t s_tilde = 1;
  std::vector<double> conds;  // kappa(Y_{k,i}) for i = 0..s_bar
  double bound = 0.0;         // eps*/(c eps r_norm)
};

// Largest i in {1..s_bar} with kappa(Y_{k,i}) <= eps*/(c eps r_norm); i = 1 is
// always accepted.
STildeSelection select_s_tilde(const la::SmallSymMatrix& g, std::size_t s_bar, double c, double eps,
                               double eps_star, double r_norm);

// Same rule on precomputed estimates.
STildeSelection select_s_tilde(std::vector<double> conds, std::size_t s_bar, double c, double eps,
                               double eps_star, double r_norm);

SolveResult adaptive_solve(const ProblemInstance& p, const AdaptiveConfig& cfg);

enum class Outcome { Converged, Stagnated, Diverged };

struct AccuracyReport {
  Outcome outcome = Outcome::Diverged;
  std::size_t outer = 0;
  std::size_t total = 0;
  double attained = 0.0;
  std::string cell;
};

// Table cell: "outer (total)" when converged, an en dash followed by the
// attained residual in brackets when stagnated, a lone en dash when diverged.
AccuracyReport attained_accuracy_report(const SolveTrace& trace);

std::string format_cell(Outcome o, std::size_t outer, std::size_t total, double attained);

}  // namespace ascg
