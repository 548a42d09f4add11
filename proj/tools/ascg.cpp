#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "ascg/harness.hpp"
#include "ascg/hscg.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive s-step conjugate gradient driver"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Run one solver on one matrix");
  std::string matrix, alg = "adaptive-improved", basis = "newton", cstrat = "adaptive", trace_out, eps_mode = "1e-6";
  std::size_t s = 10, sigma = 0, max_outer = 0, max_iters = 0, s_bar0 = 1;
  std::optional<std::size_t> f;
  bool no_precondition = false;
  ascg::StopRules stop;
  solve->add_option("--matrix", matrix, "Matrix Market file, identity:N or laplacian9:M")->required();
  solve->add_option("--alg", alg, "hscg | sstep | adaptive-old | adaptive-improved");
  solve->add_option("--s", s, "s for fixed s-step CG");
  solve->add_option("--sigma", sigma, "maximum s_k for the adaptive variants (defaults to --s)");
  solve->add_option("--f", f, "maximum growth of s_bar per outer loop (defaults to sigma)");
  solve->add_option("--s-bar0", s_bar0, "initial s_bar");
  solve->add_option("--eps-star", eps_mode, "target relative residual, or hscg-attainable");
  solve->add_option("--basis", basis, "monomial | newton | chebyshev");
  solve->add_option("--c-strategy", cstrat, "adaptive | unit | kappa | full");
  solve->add_option("--max-outer", max_outer, "outer loop limit (0 = default)");
  solve->add_option("--max-iters", max_iters, "HSCG iteration limit (0 = 100 n)");
  solve->add_option("--trace-out", trace_out, "write the per-iteration trace CSV here");
  solve->add_option("--stagnation-window", stop.stagnation_window, "iterations without a new residual minimum");
  solve->add_flag("--no-precondition", no_precondition, "skip the diagonal scaling");

  auto* grid = app.add_subcommand("grid", "Run an experiment grid from a spec file");
  std::string spec_path, out_dir = "results";
  grid->add_option("--spec", spec_path, "key = value experiment spec")->required();
  grid->add_option("--out-dir", out_dir, "output directory");

  auto* report = app.add_subcommand("report", "Summarize a rows.csv file");
  std::string rows_path, format = "markdown", report_out;
  report->add_option("--rows", rows_path, "rows.csv produced by grid")->required();
  report->add_option("--format", format, "markdown | csv");
  report->add_option("--out", report_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const auto a = ascg::load_matrix_source(matrix);
      const auto problem = ascg::make_problem(a, matrix, !no_precondition);
      ascg::SolverChoice choice;
      choice.algorithm = ascg::parse_algorithm(alg);
      choice.basis = ascg::parse_basis_kind(basis);
      choice.c_strategy = ascg::ritz::parse_c_strategy(cstrat);
      if (choice.algorithm == ascg::Algorithm::AdaptiveOld && cstrat == "adaptive" &&
          !solve->get_option("--c-strategy")->count())
        choice.c_strategy = ascg::ritz::CStrategy::Unit;
      choice.s = (choice.algorithm == ascg::Algorithm::AdaptiveOld ||
                  choice.algorithm == ascg::Algorithm::AdaptiveImproved) && sigma
                     ? sigma
                     : s;
      choice.f = f;
      choice.s_bar0 = s_bar0;
      choice.max_outer = max_outer;
      choice.max_iters = max_iters;
      choice.stop = stop;
      const auto mode = ascg::EpsMode::parse(eps_mode);
      choice.eps_star = mode.hscg_attainable ? ascg::hscg_attainable_accuracy(problem, max_iters, stop) : mode.value;

      const auto res = ascg::run_solver(problem, choice);
      const auto rep = ascg::attained_accuracy_report(res.trace);
      std::printf("n = %zu  nnz = %zu  ||A|| = %.4g  kappa = %.4g\n", problem.a.n, problem.a.nnz(), problem.norm_a,
                  problem.kappa_a);
      std::printf("%s: %s  eps* = %.3g  final residual = %.3e  outer = %zu  iterations = %zu\n", alg.c_str(),
                  std::string(ascg::to_string(res.trace.status)).c_str(), choice.eps_star,
                  res.trace.final_true_resid, res.trace.total_outer, res.trace.total_iters);
      std::printf("cell: %s\n", rep.cell.c_str());
      if (!res.trace.failure.empty()) std::printf("failure: %s\n", res.trace.failure.c_str());
      if (!trace_out.empty()) ascg::emit_trace_csv(res.trace, std::filesystem::path(trace_out));
    } else if (*grid) {
      const auto spec = ascg::ExperimentSpec::parse_file(spec_path);
      const auto rows = ascg::run_grid(spec, out_dir);
      ascg::emit_summary_table(rows, ascg::TableFormat::Markdown, std::filesystem::path(out_dir) / "summary.md");
      std::size_t errors = 0;
      for (const auto& r : rows) errors += r.outcome == "error";
      std::printf("%zu cells, %zu errors; results in %s\n", rows.size(), errors, out_dir.c_str());
    } else if (*report) {
      const auto rows = ascg::read_rows_csv(std::filesystem::path(rows_path));
      const auto fmt = ascg::parse_table_format(format);
      if (report_out.empty())
        ascg::emit_summary_table(rows, fmt, std::cout);
      else
        ascg::emit_summary_table(rows, fmt, std::filesystem::path(report_out));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
