#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ascg {

using Vector = std::vector<double>;

// Unit roundoff for binary64 (half of DBL_EPSILON).
inline constexpr double kUnitRoundoff = 0x1.0p-53;

// Thrown when a Matrix Market file cannot be ingested.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structural problems with an input matrix (nonpositive row scale, bad shapes).
class DegenerateMatrixError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iterative kernel failed to converge; carries the residual it stopped at.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace ascg
