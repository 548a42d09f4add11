#include "ascg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ascg/hscg.hpp"
#include "ascg/sstep_cg.hpp"

namespace ascg {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a nonnegative integer, got '" + s + "'");
  }
  if (pos != s.size() || s.front() == '-') throw ParseError(line, "expected a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& s, std::size_t line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError(line, "expected a boolean, got '" + s + "'");
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string file_safe(std::string s) {
  for (char& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.')) ch = '_';
  return s;
}

// Rounds up to two significant digits so the requested tolerance is reachable.
// An exact solve is floored at unit roundoff.
double round_up_2sig(double v) {
  if (!std::isfinite(v)) return v;
  v = std::max(v, kUnitRoundoff);
  const double scale = std::pow(10.0, std::floor(std::log10(v)) - 1.0);
  return std::ceil(v / scale) * scale;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Hscg: return "hscg";
    case Algorithm::SStep: return "sstep";
    case Algorithm::AdaptiveOld: return "adaptive-old";
    case Algorithm::AdaptiveImproved: return "adaptive-improved";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "hscg") return Algorithm::Hscg;
  if (s == "sstep") return Algorithm::SStep;
  if (s == "adaptive-old" || s == "old") return Algorithm::AdaptiveOld;
  if (s == "adaptive-improved" || s == "improved" || s == "adaptive") return Algorithm::AdaptiveImproved;
  throw ParameterError("unknown algorithm '" + std::string(s) + "'");
}

SolveResult run_solver(const ProblemInstance& p, const SolverChoice& choice) {
  switch (choice.algorithm) {
    case Algorithm::Hscg: {
      HscgOptions o;
      o.eps_star = choice.eps_star;
      o.max_iters = choice.max_iters;
      o.stop = choice.stop;
      return hscg_solve(p, o);
    }
    case Algorithm::SStep: {
      SStepOptions o;
      o.s = choice.s;
      o.basis = choice.basis;
      o.eps_star = choice.eps_star;
      o.max_outer = choice.max_outer;
      o.stop = choice.stop;
      if (choice.basis != BasisKind::Monomial && p.a.n <= 4000) o.spectral_bounds = exact_spectral_bounds(p.a);
      return sstep_solve(p, o);
    }
    case Algorithm::AdaptiveOld:
    case Algorithm::AdaptiveImproved: {
      AdaptiveConfig cfg;
      cfg.sigma = choice.s;
      cfg.s_bar0 = std::min(choice.s_bar0, choice.s);
      cfg.f = choice.f;
      cfg.eps_star = choice.eps_star;
      cfg.basis_kind = choice.basis;
      cfg.c_strategy = choice.c_strategy;
      cfg.variant = choice.algorithm == Algorithm::AdaptiveOld ? AdaptiveVariant::Old : AdaptiveVariant::Improved;
      cfg.max_outer = choice.max_outer;
      cfg.stop = choice.stop;
      // The old variant has no Ritz estimates, so non-monomial bases need bounds up front.
      if (cfg.variant == AdaptiveVariant::Old && choice.basis != BasisKind::Monomial && p.a.n <= 4000)
        cfg.initial_bounds = exact_spectral_bounds(p.a);
      return adaptive_solve(p, cfg);
    }
  }
  throw ParameterError("run_solver: unknown algorithm");
}

SparseMatrix load_matrix_source(const std::string& source) {
  const auto colon = source.find(':');
  if (colon != std::string::npos) {
    const std::string kind = source.substr(0, colon);
    if (kind == "identity" || kind == "laplacian9") {
      const std::size_t n = parse_count(source.substr(colon + 1), 0);
      if (n == 0) throw ParameterError("matrix generator size must be positive");
      return kind == "identity" ? SparseMatrix::identity(n) : nine_point_laplacian(n);
    }
  }
  return read_matrix_market(std::filesystem::path(source));
}

std::string EpsMode::name() const {
  if (hscg_attainable) return "hscg-attainable";
  char buf[40];
  std::snprintf(buf, sizeof buf, "fixed(%g)", value);
  return buf;
}

EpsMode EpsMode::parse(std::string_view s) {
  EpsMode m;
  if (s == "hscg-attainable" || s == "hscg") {
    m.hscg_attainable = true;
    return m;
  }
  std::string body(s);
  if (body.rfind("fixed(", 0) == 0 && body.back() == ')') body = body.substr(6, body.size() - 7);
  else if (body.rfind("fixed:", 0) == 0) body = body.substr(6);
  std::size_t pos = 0;
  try {
    m.value = std::stod(body, &pos);
  } catch (const std::exception&) {
    throw ParameterError("bad eps mode '" + std::string(s) + "'");
  }
  if (pos != body.size() || !(m.value > 0.0)) throw ParameterError("bad eps mode '" + std::string(s) + "'");
  return m;
}

void ExperimentSpec::validate() const {
  if (matrices.empty()) throw ParameterError("experiment spec lists no matrices");
  if (algorithms.empty()) throw ParameterError("experiment spec lists no algorithms");
  if (eps_modes.empty()) throw ParameterError("experiment spec lists no eps modes");
  if (bases.empty() || c_strategies.empty()) throw ParameterError("experiment spec needs bases and c strategies");
  for (auto s : s_values)
    if (s == 0) throw ParameterError("s values must be positive");
  const bool needs_s = std::any_of(algorithms.begin(), algorithms.end(), [](Algorithm a) { return a != Algorithm::Hscg; });
  if (needs_s && s_values.empty()) throw ParameterError("experiment spec lists no s values");
}

ExperimentSpec ExperimentSpec::parse(std::istream& in) {
  ExperimentSpec spec;
  spec.algorithms.clear();
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto items = split_list(value);
    try {
      if (key == "matrix") {
        if (items.empty() || items.size() > 2) throw ParseError(line_no, "matrix takes a source and optional label");
        std::string label = items.size() == 2 ? items[1] : std::filesystem::path(items[0]).stem().string();
        spec.matrices.push_back({items[0], label});
      } else if (key == "algorithms") {
        for (const auto& s : items) spec.algorithms.push_back(parse_algorithm(s));
      } else if (key == "s_values") {
        spec.s_values.clear();
        for (const auto& s : items) spec.s_values.push_back(parse_count(s, line_no));
      } else if (key == "eps_modes") {
        spec.eps_modes.clear();
        for (const auto& s : items) spec.eps_modes.push_back(EpsMode::parse(s));
      } else if (key == "bases") {
        spec.bases.clear();
        for (const auto& s : items) spec.bases.push_back(parse_basis_kind(s));
      } else if (key == "c_strategies") {
        spec.c_strategies.clear();
        for (const auto& s : items) spec.c_strategies.push_back(ritz::parse_c_strategy(s));
      } else if (key == "max_outer") {
        spec.max_outer = parse_count(value, line_no);
      } else if (key == "max_iters") {
        spec.max_iters = parse_count(value, line_no);
      } else if (key == "f") {
        spec.f = parse_count(value, line_no);
      } else if (key == "s_bar0") {
        spec.s_bar0 = parse_count(value, line_no);
      } else if (key == "precondition") {
        spec.precondition = parse_bool(value, line_no);
      } else if (key == "traces") {
        spec.write_traces = parse_bool(value, line_no);
      } else {
        throw ParseError(line_no, "unknown key '" + key + "'");
      }
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path.string());
  return parse(in);
}

std::vector<GridCell> enumerate_cells(const ExperimentSpec& spec) {
  std::vector<GridCell> cells;
  for (std::size_t m = 0; m < spec.matrices.size(); ++m)
    for (std::size_t e = 0; e < spec.eps_modes.size(); ++e)
      for (auto alg : spec.algorithms) {
        if (alg == Algorithm::Hscg) {
          cells.push_back({m, alg, BasisKind::Monomial, ritz::CStrategy::Unit, 0, e});
          continue;
        }
        for (auto basis : spec.bases) {
          if (alg == Algorithm::SStep) {
            for (auto s : spec.s_values) cells.push_back({m, alg, basis, ritz::CStrategy::Unit, s, e});
            continue;
          }
          for (auto c : spec.c_strategies)
            for (auto s : spec.s_values) cells.push_back({m, alg, basis, c, s, e});
        }
      }
  return cells;
}

std::string trace_file_name(const ResultRow& row) {
  char idx[16];
  std::snprintf(idx, sizeof idx, "%04zu", row.index);
  return file_safe(std::string(idx) + "_" + row.matrix + "_" + row.algorithm + "_" + row.basis + "_" +
                   row.c_strategy + "_s" + std::to_string(row.s) + "_" + row.eps_mode) +
         ".csv";
}

std::vector<ResultRow> run_grid(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  std::filesystem::create_directories(out_dir);
  if (spec.write_traces) std::filesystem::create_directories(out_dir / "traces");

  std::vector<std::optional<ProblemInstance>> problems(spec.matrices.size());
  std::vector<std::string> load_errors(spec.matrices.size());
  for (std::size_t m = 0; m < spec.matrices.size(); ++m) {
    try {
      problems[m] = make_problem(load_matrix_source(spec.matrices[m].source), spec.matrices[m].label, spec.precondition);
    } catch (const std::exception& e) {
      load_errors[m] = e.what();
    }
  }

  // HSCG attainable accuracy per matrix, shared by every cell that needs it.
  const bool any_attainable =
      std::any_of(spec.eps_modes.begin(), spec.eps_modes.end(), [](const EpsMode& m) { return m.hscg_attainable; });
  std::vector<double> attainable(spec.matrices.size(), 0.0);
  if (any_attainable) {
#pragma omp parallel for schedule(dynamic)
    for (long m = 0; m < static_cast<long>(problems.size()); ++m)
      if (problems[m]) attainable[m] = round_up_2sig(hscg_attainable_accuracy(*problems[m], spec.max_iters));
  }

  const auto cells = enumerate_cells(spec);
  std::vector<ResultRow> rows(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long ci = 0; ci < static_cast<long>(cells.size()); ++ci) {
    const auto& cell = cells[ci];
    auto& row = rows[ci];
    row.index = static_cast<std::size_t>(ci);
    row.matrix = spec.matrices[cell.matrix].label;
    row.algorithm = std::string(to_string(cell.algorithm));
    row.basis = cell.algorithm == Algorithm::Hscg ? "-" : std::string(to_string(cell.basis));
    row.c_strategy = cell.algorithm == Algorithm::Hscg || cell.algorithm == Algorithm::SStep
                         ? "-"
                         : std::string(to_string(cell.c_strategy));
    row.s = cell.s;
    const auto& mode = spec.eps_modes[cell.eps_mode];
    row.eps_mode = mode.name();
    if (!problems[cell.matrix]) {
      row.outcome = "error";
      row.cell = "error";
      row.error = load_errors[cell.matrix];
      continue;
    }
    row.eps_star = mode.hscg_attainable ? attainable[cell.matrix] : mode.value;
    try {
      SolverChoice choice;
      choice.algorithm = cell.algorithm;
      choice.basis = cell.basis;
      choice.c_strategy = cell.c_strategy;
      choice.s = std::max<std::size_t>(cell.s, 1);
      choice.f = spec.f;
      choice.s_bar0 = spec.s_bar0;
      choice.eps_star = row.eps_star;
      choice.max_outer = spec.max_outer;
      choice.max_iters = spec.max_iters;
      const auto res = run_solver(*problems[cell.matrix], choice);
      const auto rep = attained_accuracy_report(res.trace);
      row.outcome = rep.outcome == Outcome::Converged ? "converged"
                    : rep.outcome == Outcome::Stagnated ? "stagnated"
                                                         : "diverged";
      row.total_outer = res.trace.total_outer;
      row.total_iters = res.trace.total_iters;
      row.outer_marks = res.trace.outer_marks.size();
      row.final_true_resid = res.trace.final_true_resid;
      row.cell = rep.cell;
      row.error = res.trace.failure;
      if (spec.write_traces) emit_trace_csv(res.trace, out_dir / "traces" / trace_file_name(row));
    } catch (const std::exception& e) {
      row.outcome = "error";
      row.cell = "error";
      row.error = e.what();
    }
  }
  write_rows_csv(rows, out_dir / "rows.csv");
  return rows;
}

void emit_trace_csv(const SolveTrace& trace, std::ostream& out) {
  out << "global_iter,outer_iter,s_k,rel_true_resid,rel_upd_resid,resid_gap,lambda_min_est,lambda_max_est,c_value\n";
  for (std::size_t i = 0; i < trace.total_iters; ++i) {
    const std::size_t k = trace.outer_of_iter[i];
    const std::size_t s_k = k < trace.s_schedule.size() ? trace.s_schedule[k] : 0;
    out << i + 1 << ',' << k << ',' << s_k << ',' << full_precision(trace.true_resid[i]) << ','
        << full_precision(trace.upd_resid[i]) << ',' << full_precision(trace.resid_gap[i]) << ','
        << full_precision(trace.lambda_min[i]) << ',' << full_precision(trace.lambda_max[i]) << ','
        << full_precision(trace.c_values[i]) << '\n';
  }
}

void emit_trace_csv(const SolveTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file " + path.string());
  emit_trace_csv(trace, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {
constexpr const char* kRowsHeader =
    "index,matrix,algorithm,basis,c_strategy,s,eps_mode,eps_star,outcome,total_outer,total_iters,outer_marks,"
    "final_true_resid,cell,error";
}

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kRowsHeader << '\n';
  for (const auto& r : rows) {
    out << r.index << ',' << csv_safe(r.matrix) << ',' << r.algorithm << ',' << r.basis << ',' << r.c_strategy
        << ',' << r.s << ',' << r.eps_mode << ',' << full_precision(r.eps_star) << ',' << r.outcome << ','
        << r.total_outer << ',' << r.total_iters << ',' << r.outer_marks << ',' << full_precision(r.final_true_resid)
        << ',' << r.cell << ',' << csv_safe(r.error) << '\n';
  }
}

void write_rows_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write rows file " + path.string());
  write_rows_csv(rows, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<ResultRow> read_rows_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || trim(line) != kRowsHeader) throw ParseError(1, "unexpected rows header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 15) throw ParseError(line_no, "expected 15 fields");
    try {
      ResultRow r;
      r.index = parse_count(f[0], line_no);
      r.matrix = f[1];
      r.algorithm = f[2];
      r.basis = f[3];
      r.c_strategy = f[4];
      r.s = parse_count(f[5], line_no);
      r.eps_mode = f[6];
      r.eps_star = std::stod(f[7]);
      r.outcome = f[8];
      r.total_outer = parse_count(f[9], line_no);
      r.total_iters = parse_count(f[10], line_no);
      r.outer_marks = parse_count(f[11], line_no);
      r.final_true_resid = std::stod(f[12]);
      r.cell = f[13];
      r.error = f[14];
      rows.push_back(std::move(r));
    } catch (const std::invalid_argument&) {
      throw ParseError(line_no, "malformed number");
    }
  }
  return rows;
}

std::vector<ResultRow> read_rows_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rows file " + path.string());
  return read_rows_csv(in);
}

TableFormat parse_table_format(std::string_view s) {
  if (s == "markdown" || s == "md") return TableFormat::Markdown;
  if (s == "csv") return TableFormat::Csv;
  throw ParameterError("unknown table format '" + std::string(s) + "'");
}

void emit_summary_table(const std::vector<ResultRow>& rows, TableFormat fmt, std::ostream& out) {
  if (rows.empty()) throw ParameterError("emit_summary_table: no rows");

  struct Group {
    std::string matrix, eps_mode;
    double eps_star = 0.0;
    std::vector<std::string> configs;
    std::map<std::string, std::map<std::size_t, std::string>> cells;
    std::vector<std::size_t> s_cols;
  };
  std::vector<Group> groups;
  const auto config_name = [](const ResultRow& r) {
    std::string name = r.algorithm;
    if (r.basis != "-") name += " " + r.basis;
    if (r.c_strategy != "-") name += " c=" + r.c_strategy;
    return name;
  };
  for (const auto& r : rows) {
    auto g = std::find_if(groups.begin(), groups.end(),
                          [&](const Group& x) { return x.matrix == r.matrix && x.eps_mode == r.eps_mode; });
    if (g == groups.end()) {
      groups.push_back({r.matrix, r.eps_mode, r.eps_star, {}, {}, {}});
      g = groups.end() - 1;
    }
    const auto name = config_name(r);
    if (std::find(g->configs.begin(), g->configs.end(), name) == g->configs.end()) g->configs.push_back(name);
    if (r.s != 0 && std::find(g->s_cols.begin(), g->s_cols.end(), r.s) == g->s_cols.end()) g->s_cols.push_back(r.s);
    g->cells[name][r.s] = r.cell;
  }

  if (fmt == TableFormat::Csv) out << "matrix,eps_mode,eps_star,algorithm,s,cell\n";
  for (auto& g : groups) {
    std::sort(g.s_cols.begin(), g.s_cols.end());
    if (g.s_cols.empty()) g.s_cols.push_back(0);
    const auto lookup = [&](const std::string& cfg, std::size_t s) -> std::string {
      const auto& m = g.cells[cfg];
      if (auto it = m.find(s); it != m.end()) return it->second;
      if (auto it = m.find(0); it != m.end()) return it->second;
      return "";
    };
    if (fmt == TableFormat::Markdown) {
      char eps_text[32];
      std::snprintf(eps_text, sizeof eps_text, "%.3g", g.eps_star);
      out << "### " << g.matrix << ", eps* = " << eps_text << " (" << g.eps_mode << ")\n\n";
      out << "| algorithm |";
      for (auto s : g.s_cols) out << " s=" << s << " |";
      out << "\n|---|";
      for (std::size_t i = 0; i < g.s_cols.size(); ++i) out << "---|";
      out << '\n';
      for (const auto& cfg : g.configs) {
        out << "| " << cfg << " |";
        for (auto s : g.s_cols) out << ' ' << lookup(cfg, s) << " |";
        out << '\n';
      }
      out << '\n';
    } else {
      for (const auto& cfg : g.configs)
        for (auto s : g.s_cols)
          out << csv_safe(g.matrix) << ',' << g.eps_mode << ',' << full_precision(g.eps_star) << ',' << cfg << ','
              << s << ',' << lookup(cfg, s) << '\n';
    }
  }
}

void emit_summary_table(const std::vector<ResultRow>& rows, TableFormat fmt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write table file " + path.string());
  emit_summary_table(rows, fmt, out);
}

}  // namespace ascg
