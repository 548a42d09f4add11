#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>

#include "ascg/common.hpp"
#include "ascg/sparse_matrix.hpp"

namespace ascg {

// Reads a Matrix Market "coordinate real|integer symmetric|general" file.
// Symmetric storage is expanded to both triangles; duplicates are summed.
// Throws ParseError (with the offending line number) on malformed input.
SparseMatrix read_matrix_market(const std::filesystem::path& path);
SparseMatrix read_matrix_market(std::istream& in);

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);

struct JacobiScaling {
  SparseMatrix scaled;      // D^{-1/2} A D^{-1/2}
  Vector inv_sqrt_diag;     // d_i^{-1/2}
};

// Two-sided diagonal scaling with d_i = max_j |a_ij| over the stored row.
// Scaled entries use the product d_lo^{-1/2} * d_hi^{-1/2} (lo/hi ordered by
// index), so a symmetric input gives a bitwise symmetric result.
JacobiScaling jacobi_precondition(const SparseMatrix& a);

// Right-hand side with every entry 1/sqrt(n).
Vector build_rhs(std::size_t n);

struct NormEstimateOptions {
  int max_iters = 500;
  double tol = 1e-10;                 // relative Rayleigh-quotient change
  std::size_t dense_limit = 2000;     // exact eigensolve at or below this size
};

struct OperatorNorms {
  double norm_a = 0.0;      // ||A||_2
  double norm_abs_a = 0.0;  // || |A| ||_2
  double lambda_min = 0.0;
  double kappa_a = 0.0;
  int iterations = 0;       // power-iteration steps used (max over the runs)
  bool approximate = false; // some iteration stopped at max_iters
  bool dense = false;       // extremal eigenvalues of A from a dense eigensolve
};

OperatorNorms estimate_operator_norms(const SparseMatrix& a, const NormEstimateOptions& opts = {});

struct ProblemInstance {
  SparseMatrix a;
  Vector b;
  Vector x0;
  double norm_a = 0.0;
  double norm_abs_a = 0.0;
  double kappa_a = 1.0;
  std::string label;

  double nu() const { return norm_abs_a / norm_a; }
};

// Protocol of the experiments: Jacobi-scale A, b_i = 1/sqrt(n), x0 = 0.
ProblemInstance make_problem(const SparseMatrix& a, std::string label, bool precondition = true,
                             const NormEstimateOptions& opts = {});

// 9-point finite-difference Laplacian on an m x m grid (8 on the diagonal,
// -1 for each of the eight neighbours).
SparseMatrix nine_point_laplacian(std::size_t m);

}  // namespace ascg
