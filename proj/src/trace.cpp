#include "ascg/trace.hpp"

namespace ascg {

std::string_view to_string(BasisKind k) {
  switch (k) {
    case BasisKind::Monomial: return "monomial";
    case BasisKind::Newton: return "newton";
    case BasisKind::Chebyshev: return "chebyshev";
  }
  return "?";
}

BasisKind parse_basis_kind(std::string_view s) {
  if (s == "monomial") return BasisKind::Monomial;
  if (s == "newton") return BasisKind::Newton;
  if (s == "chebyshev") return BasisKind::Chebyshev;
  throw ParameterError("unknown basis '" + std::string(s) + "'");
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Running: return "running";
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Stagnated: return "stagnated";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::MaxIterations: return "max-iterations";
  }
  return "?";
}

}  // namespace ascg
