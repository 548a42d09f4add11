#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ascg/harness.hpp"
#include "ascg/hscg.hpp"

using namespace ascg;
namespace fs = std::filesystem;

namespace {

ExperimentSpec spec_from(const std::string& text) {
  std::istringstream in(text);
  return ExperimentSpec::parse(in);
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("ascg_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

std::size_t parse_line_of(const std::string& text) {
  try {
    spec_from(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("identity grid gives a one-iteration cell") {
  const auto dir = fresh_dir("identity");
  const auto spec = spec_from("matrix = identity:10 id\nalgorithms = hscg\neps_modes = 1e-6\n");
  const auto rows = run_grid(spec, dir);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].cell == "1 (1)");
  CHECK(rows[0].outcome == "converged");
  CHECK(rows[0].matrix == "id");
  const auto trace = dir / "traces" / trace_file_name(rows[0]);
  REQUIRE(fs::exists(trace));
  CHECK(line_count(trace) == 2);
  CHECK(fs::exists(dir / "rows.csv"));
  fs::remove_all(dir);
}

TEST_CASE("trace CSV layout") {
  const auto p = make_problem(nine_point_laplacian(8), "l8");
  const auto res = hscg_solve(p, {});
  std::ostringstream out;
  emit_trace_csv(res.trace, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "global_iter,outer_iter,s_k,rel_true_resid,rel_upd_resid,resid_gap,lambda_min_est,lambda_max_est,c_value");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    if (rows == 1) CHECK(line.rfind("1,0,", 0) == 0);
  }
  CHECK(rows == res.trace.total_iters);
  // Full precision round trip of the residual column.
  std::istringstream again(out.str());
  std::getline(again, line);
  std::getline(again, line);
  std::stringstream fields(line);
  std::string f;
  for (int i = 0; i < 4; ++i) std::getline(fields, f, ',');
  CHECK(std::stod(f) == res.trace.true_resid[0]);
}

TEST_CASE("grid rows, traces and determinism") {
  const std::string text =
      "# small grid\n"
      "matrix = laplacian9:10 lap10\n"
      "matrix = identity:6\n"
      "algorithms = hscg, sstep, adaptive-old, adaptive-improved\n"
      "s_values = 3 5\n"
      "eps_modes = hscg-attainable, fixed(1e-6)\n"
      "bases = monomial newton\n"
      "c_strategies = adaptive unit\n";
  const auto spec = spec_from(text);
  const auto cells = enumerate_cells(spec);
  // Per matrix and eps mode: 1 hscg + 2 bases x 2 s (sstep) + 2 variants x 2 bases x 2 c x 2 s.
  CHECK(cells.size() == 2 * 2 * (1 + 4 + 16));

  const auto d1 = fresh_dir("grid1"), d2 = fresh_dir("grid2");
  const auto rows = run_grid(spec, d1);
  const auto rows2 = run_grid(spec, d2);
  REQUIRE(rows.size() == cells.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    INFO(r.matrix << " " << r.algorithm << " " << r.basis << " " << r.c_strategy << " s=" << r.s);
    CHECK(r.index == i);
    CHECK(r.outcome != "error");
    if (r.outcome == "diverged") CHECK_FALSE(r.error.empty());
    CHECK(r.outer_marks == r.total_outer);
    CHECK(r.cell == format_cell(r.outcome == "converged"   ? Outcome::Converged
                                : r.outcome == "diverged" ? Outcome::Diverged
                                                          : Outcome::Stagnated,
                                r.total_outer, r.total_iters, r.final_true_resid));
    const auto trace = d1 / "traces" / trace_file_name(r);
    REQUIRE(fs::exists(trace));
    CHECK(line_count(trace) == r.total_iters + 1);
    CHECK(slurp(trace) == slurp(d2 / "traces" / trace_file_name(rows2[i])));
    if (r.algorithm == "adaptive-improved") CHECK(r.outcome == "converged");
    if (r.matrix == "identity:6") CHECK(r.eps_star > 0.0);
  }
  CHECK(slurp(d1 / "rows.csv") == slurp(d2 / "rows.csv"));

  // The attainable-accuracy target is HSCG's, rounded up to two digits.
  const double att = hscg_attainable_accuracy(make_problem(nine_point_laplacian(10), "lap10"));
  for (const auto& r : rows)
    if (r.matrix == "lap10" && r.eps_mode == "hscg-attainable") {
      CHECK(r.eps_star >= att);
      CHECK(r.eps_star <= att * 1.1);
    }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("a missing matrix only fails its own cells") {
  const auto dir = fresh_dir("missing");
  const auto spec = spec_from("matrix = /nonexistent/m.mtx\nmatrix = identity:4 id\nalgorithms = hscg\n");
  const auto rows = run_grid(spec, dir);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].outcome == "error");
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[1].cell == "1 (1)");
  fs::remove_all(dir);
}

TEST_CASE("spec parsing") {
  const auto spec = spec_from(
      "matrix = data/x.mtx\nalgorithms = sstep\ns_values = 4\nmax_outer = 7\nf = 2\ns_bar0 = 3\n"
      "precondition = no\ntraces = false\nc_strategies = kappa full\n");
  CHECK(spec.matrices[0].label == "x");
  CHECK(spec.s_values == std::vector<std::size_t>{4});
  CHECK(spec.max_outer == 7);
  CHECK(spec.f == std::size_t{2});
  CHECK(spec.s_bar0 == 3);
  CHECK_FALSE(spec.precondition);
  CHECK_FALSE(spec.write_traces);
  CHECK(spec.c_strategies.size() == 2);

  CHECK(parse_line_of("matrix = identity:3\nalgorithms = hscg\nbogus = 1\n") == 3);
  CHECK(parse_line_of("matrix = identity:3\nno equals sign\n") == 2);
  CHECK(parse_line_of("matrix = identity:3\nalgorithms = hscg\ns_values = 5 -1\n") == 3);
  CHECK(parse_line_of("matrix = identity:3\nalgorithms = quantum\n") == 2);
  CHECK(parse_line_of("matrix = identity:3\nalgorithms = hscg\neps_modes = fixed(abc)\n") == 3);
  CHECK_THROWS_AS(spec_from("algorithms = hscg\n"), ParameterError);
  CHECK_THROWS_AS(spec_from("matrix = identity:3\n"), ParameterError);
  CHECK_THROWS_AS(spec_from("matrix = identity:3\nalgorithms = sstep\ns_values = 0\n"), ParameterError);
  CHECK_THROWS(ExperimentSpec::parse_file("/nonexistent/spec.txt"));
}

TEST_CASE("eps modes and names") {
  CHECK(EpsMode::parse("hscg-attainable").hscg_attainable);
  CHECK(EpsMode::parse("1e-6").value == 1e-6);
  CHECK(EpsMode::parse("fixed(1e-8)").value == 1e-8);
  CHECK(EpsMode::parse("fixed:2e-10").value == 2e-10);
  CHECK(EpsMode::parse("1e-6").name() == "fixed(1e-06)");
  CHECK(EpsMode::parse("hscg").name() == "hscg-attainable");
  CHECK_THROWS_AS(EpsMode::parse("-1"), ParameterError);
  CHECK_THROWS_AS(EpsMode::parse("1e-6x"), ParameterError);
  for (auto a : {Algorithm::Hscg, Algorithm::SStep, Algorithm::AdaptiveOld, Algorithm::AdaptiveImproved})
    CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("x"), ParameterError);
  CHECK(load_matrix_source("identity:5").n == 5);
  CHECK(load_matrix_source("laplacian9:4").n == 16);
  CHECK_THROWS(load_matrix_source("identity:0"));
  CHECK_THROWS(load_matrix_source("/nonexistent/file.mtx"));
}

TEST_CASE("rows CSV round trip") {
  std::vector<ResultRow> rows(2);
  rows[0] = {0, "m,1", "hscg", "-", "-", 0, "fixed(1e-06)", 1e-6, "converged", 34, 34, 34, 8.1e-7, "34 (34)", ""};
  rows[1] = {1, "m", "adaptive-improved", "newton", "adaptive", 10, "hscg-attainable", 2.2e-10, "stagnated",
             80, 700, 80, 3.1e-8, "– [3.1e-08]", "boom, twice"};
  std::stringstream ss;
  write_rows_csv(rows, ss);
  const auto back = read_rows_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].matrix == "m;1");
  CHECK(back[1].cell == "– [3.1e-08]");
  CHECK(back[1].eps_star == 2.2e-10);
  CHECK(back[1].final_true_resid == 3.1e-8);
  CHECK(back[1].total_iters == 700);
  CHECK(back[1].error == "boom; twice");
  std::istringstream bad("not,a,header\n");
  CHECK_THROWS_AS(read_rows_csv(bad), ParseError);
}

TEST_CASE("summary tables") {
  std::vector<ResultRow> rows;
  const auto row = [](std::string alg, std::string basis, std::string c, std::size_t s, std::string cell) {
    ResultRow r;
    r.matrix = "gr_30_30";
    r.algorithm = std::move(alg);
    r.basis = std::move(basis);
    r.c_strategy = std::move(c);
    r.s = s;
    r.eps_mode = "fixed(1e-06)";
    r.eps_star = 1e-6;
    r.cell = std::move(cell);
    return r;
  };
  rows.push_back(row("hscg", "-", "-", 0, "34 (34)"));
  rows.push_back(row("adaptive-improved", "newton", "adaptive", 5, "134 (1328)"));
  rows.push_back(row("adaptive-improved", "newton", "adaptive", 10, "– [3.1e-08]"));
  rows.push_back(row("adaptive-old", "monomial", "unit", 5, "–"));
  rows.push_back(row("adaptive-old", "monomial", "unit", 10, "8 (34)"));

  std::ostringstream md;
  emit_summary_table(rows, TableFormat::Markdown, md);
  const auto text = md.str();
  CHECK(text.find("### gr_30_30, eps* = 1e-06 (fixed(1e-06))") != std::string::npos);
  CHECK(text.find("| algorithm | s=5 | s=10 |") != std::string::npos);
  CHECK(text.find("| hscg | 34 (34) | 34 (34) |") != std::string::npos);
  CHECK(text.find("| adaptive-improved newton c=adaptive | 134 (1328) | – [3.1e-08] |") != std::string::npos);
  CHECK(text.find("| adaptive-old monomial c=unit | – | 8 (34) |") != std::string::npos);

  std::ostringstream csv;
  emit_summary_table(rows, TableFormat::Csv, csv);
  CHECK(csv.str().rfind("matrix,eps_mode,eps_star,algorithm,s,cell\n", 0) == 0);
  CHECK(csv.str().find("gr_30_30,fixed(1e-06),9.9999999999999995e-07,adaptive-improved newton c=adaptive,5,134 (1328)") !=
        std::string::npos);

  CHECK_THROWS_AS(emit_summary_table({}, TableFormat::Markdown, md), ParameterError);
  CHECK(parse_table_format("md") == TableFormat::Markdown);
  CHECK_THROWS_AS(parse_table_format("html"), ParameterError);
}
