#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ascg/adaptive_cg.hpp"
#include "ascg/matio.hpp"
#include "ascg/ritz.hpp"
#include "ascg/trace.hpp"

namespace ascg {

enum class Algorithm { Hscg, SStep, AdaptiveOld, AdaptiveImproved };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

// A single solver configuration.
struct SolverChoice {
  Algorithm algorithm = Algorithm::AdaptiveImproved;
  BasisKind basis = BasisKind::Newton;
  ritz::CStrategy c_strategy = ritz::CStrategy::Adaptive;
  std::size_t s = 10;  // s for fixed s-step, sigma for the adaptive variants
  std::optional<std::size_t> f;
  std::size_t s_bar0 = 1;
  double eps_star = 1e-6;
  std::size_t max_outer = 0;
  std::size_t max_iters = 0;
  StopRules stop;
};

SolveResult run_solver(const ProblemInstance& p, const SolverChoice& choice);

// Matrix source: a Matrix Market path, or "identity:N" / "laplacian9:M".
SparseMatrix load_matrix_source(const std::string& source);

struct MatrixEntry {
  std::string source;
  std::string label;
};

struct EpsMode {
  bool hscg_attainable = false;
  double value = 1e-6;

  std::string name() const;
  static EpsMode parse(std::string_view s);
};

// Line-based key = value file. Recognized keys: matrix (repeatable,
// "source [label]"), algorithms, s_values, eps_modes, bases, c_strategies,
// max_outer, max_iters, f, s_bar0, precondition, traces. '#' starts a comment.
struct ExperimentSpec {
  std::vector<MatrixEntry> matrices;
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> s_values{5, 10, 15};
  std::vector<EpsMode> eps_modes{EpsMode{}};
  std::vector<BasisKind> bases{BasisKind::Newton};
  std::vector<ritz::CStrategy> c_strategies{ritz::CStrategy::Adaptive};
  std::size_t max_outer = 0;
  std::size_t max_iters = 0;
  std::optional<std::size_t> f;
  std::size_t s_bar0 = 1;
  bool precondition = true;
  bool write_traces = true;

  void validate() const;
  static ExperimentSpec parse(std::istream& in);
  static ExperimentSpec parse_file(const std::filesystem::path& path);
};

struct GridCell {
  std::size_t matrix = 0;
  Algorithm algorithm = Algorithm::Hscg;
  BasisKind basis = BasisKind::Monomial;
  ritz::CStrategy c_strategy = ritz::CStrategy::Unit;
  std::size_t s = 1;  // 0 for HSCG
  std::size_t eps_mode = 0;
};

// Deterministic cell order: matrix, eps mode, algorithm, basis, c strategy, s.
// HSCG gets one cell per (matrix, eps mode); fixed s-step one per basis.
std::vector<GridCell> enumerate_cells(const ExperimentSpec& spec);

struct ResultRow {
  std::size_t index = 0;
  std::string matrix;
  std::string algorithm;
  std::string basis;
  std::string c_strategy;
  std::size_t s = 0;
  std::string eps_mode;
  double eps_star = 0.0;
  std::string outcome;  // converged | stagnated | diverged | error
  std::size_t total_outer = 0;
  std::size_t total_iters = 0;
  std::size_t outer_marks = 0;
  double final_true_resid = 0.0;
  std::string cell;
  std::string error;
};

// Runs every cell (concurrently when OpenMP is available); per-cell failures
// are recorded in the row. Writes rows.csv and, when enabled, one trace CSV
// per cell under out_dir/traces.
std::vector<ResultRow> run_grid(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

std::string trace_file_name(const ResultRow& row);

void emit_trace_csv(const SolveTrace& trace, std::ostream& out);
void emit_trace_csv(const SolveTrace& trace, const std::filesystem::path& path);

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_rows_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_rows_csv(std::istream& in);
std::vector<ResultRow> read_rows_csv(const std::filesystem::path& path);

enum class TableFormat { Markdown, Csv };

TableFormat parse_table_format(std::string_view s);

// One table per (matrix, eps*) group: solver configurations as rows, s values
// as columns. HSCG rows carry s = 0 and fill every column.
void emit_summary_table(const std::vector<ResultRow>& rows, TableFormat fmt, std::ostream& out);
void emit_summary_table(const std::vector<ResultRow>& rows, TableFormat fmt, const std::filesystem::path& path);

}  // namespace ascg
