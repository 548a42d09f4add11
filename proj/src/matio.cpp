#include "ascg/matio.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ascg/kernels.hpp"

namespace ascg {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  auto it = std::find_if(line.begin(), line.end(), [](unsigned char c) { return !std::isspace(c); });
  return it == line.end() || *it == '%';
}

}  // namespace

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix_market(in);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  ++lineno;

  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError(lineno, "missing %%MatrixMarket banner");
  object = lower(object), format = lower(format), field = lower(field), symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError(lineno, "unsupported object '" + object + "'");
  if (format != "coordinate") throw ParseError(lineno, "only coordinate format is supported");
  if (field == "complex") throw ParseError(lineno, "complex matrices are not supported");
  if (field == "pattern") throw ParseError(lineno, "pattern-only matrices carry no values");
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError(lineno, "unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw ParseError(lineno, "unsupported symmetry '" + symmetry + "'");

  do {
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "missing size line");
    ++lineno;
  } while (blank_or_comment(line));

  long long rows = 0, cols = 0, entries = 0;
  {
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> entries) || rows <= 0 || cols <= 0 || entries < 0)
      throw ParseError(lineno, "malformed size line");
    if (rows != cols) throw ParseError(lineno, "matrix is not square");
  }
  const auto n = static_cast<std::size_t>(rows);

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  long long seen = 0;
  while (seen < entries && std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream es(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(es >> i >> j >> v)) throw ParseError(lineno, "malformed entry");
    if (i < 1 || j < 1 || i > rows || j > cols) throw ParseError(lineno, "entry index out of range");
    if (symmetric && j > i) throw ParseError(lineno, "upper-triangle entry in symmetric file");
    const auto r = static_cast<std::size_t>(i - 1), c = static_cast<std::size_t>(j - 1);
    trip.push_back({r, c, v});
    if (symmetric && r != c) trip.push_back({c, r, v});
    ++seen;
  }
  if (seen < entries) throw ParseError(lineno + 1, "file ends before all entries were read");

  return SparseMatrix::from_triplets(n, std::move(trip));
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const bool sym = a.is_symmetric;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.n; ++i)
    for (auto j : a.row_cols(i))
      if (!sym || j <= i) ++count;
  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << "\n";
  out << a.n << " " << a.n << " " << count << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < a.n; ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (!sym || cols[k] <= i) out << i + 1 << " " << cols[k] + 1 << " " << vals[k] << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

JacobiScaling jacobi_precondition(const SparseMatrix& a) {
  Vector inv_sqrt(a.n);
  for (std::size_t i = 0; i < a.n; ++i) {
    double m = 0.0;
    for (double v : a.row_values(i)) m = std::max(m, std::fabs(v));
    if (!(m > 0.0)) throw DegenerateMatrixError("row " + std::to_string(i) + " has no positive scale");
    inv_sqrt[i] = 1.0 / std::sqrt(m);
  }
  JacobiScaling out{a, inv_sqrt};
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const std::size_t j = a.col_idx[k];
      const double scale = inv_sqrt[std::min(i, j)] * inv_sqrt[std::max(i, j)];
      out.scaled.values[k] = a.values[k] * scale;
    }
  }
  return out;
}

Vector build_rhs(std::size_t n) {
  if (n == 0) throw ParameterError("build_rhs: n must be positive");
  return Vector(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

namespace {

struct PowerResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest-magnitude eigenvalue of x -> shift*x + sign*A*x by power iteration.
PowerResult power_iteration(const SparseMatrix& a, double shift, double sign, const NormEstimateOptions& opts) {
  Vector v(a.n), w(a.n);
  // Deterministic start with no special alignment to any eigenvector.
  for (std::size_t i = 0; i < a.n; ++i) v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0);
  double nv = la::norm2(v);
  for (double& x : v) x /= nv;

  PowerResult res;
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    la::spmv(a, v, w);
    for (std::size_t i = 0; i < a.n; ++i) w[i] = shift * v[i] + sign * w[i];
    const double rq = la::dot(v, w);
    const double nw = la::norm2(w);
    res.iterations = it;
    res.value = rq;
    if (nw == 0.0) {
      res.converged = true;
      break;
    }
    for (std::size_t i = 0; i < a.n; ++i) v[i] = w[i] / nw;
    if (it > 1 && std::fabs(rq - prev) <= opts.tol * std::fabs(rq)) {
      res.converged = true;
      break;
    }
    prev = rq;
  }
  return res;
}

}  // namespace

OperatorNorms estimate_operator_norms(const SparseMatrix& a, const NormEstimateOptions& opts) {
  if (a.n == 0) throw DimensionError("estimate_operator_norms: empty matrix");
  OperatorNorms out;

  const auto abs_run = power_iteration(abs_values(a), 0.0, 1.0, opts);
  out.norm_abs_a = abs_run.value;
  out.iterations = abs_run.iterations;
  out.approximate = !abs_run.converged;

  if (a.n <= opts.dense_limit) {
    const auto dense = to_dense(a);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        dense.data(), static_cast<Eigen::Index>(a.n), static_cast<Eigen::Index>(a.n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    out.lambda_min = ev(0);
    out.norm_a = std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
    out.dense = true;
  } else {
    const auto top = power_iteration(a, 0.0, 1.0, opts);
    out.norm_a = std::fabs(top.value);
    // Largest eigenvalue of ||A|| I - A is ||A|| - lambda_min.
    const auto shifted = power_iteration(a, out.norm_a, -1.0, opts);
    out.lambda_min = out.norm_a - shifted.value;
    out.iterations = std::max({out.iterations, top.iterations, shifted.iterations});
    out.approximate = out.approximate || !top.converged || !shifted.converged;
  }
  // A nonpositive estimate means the matrix is not (numerically) SPD.
  out.kappa_a = out.lambda_min > 0.0 ? out.norm_a / out.lambda_min : std::numeric_limits<double>::infinity();
  // |A| dominates A entrywise, so || |A| || >= ||A||; guard against early power-iteration stops.
  out.norm_abs_a = std::max(out.norm_abs_a, out.norm_a);
  return out;
}

ProblemInstance make_problem(const SparseMatrix& a, std::string label, bool precondition,
                             const NormEstimateOptions& opts) {
  ProblemInstance p;
  p.a = precondition ? jacobi_precondition(a).scaled : a;
  p.b = build_rhs(p.a.n);
  p.x0.assign(p.a.n, 0.0);
  const auto norms = estimate_operator_norms(p.a, opts);
  p.norm_a = norms.norm_a;
  p.norm_abs_a = norms.norm_abs_a;
  p.kappa_a = std::max(1.0, norms.kappa_a);
  p.label = std::move(label);
  return p;
}

SparseMatrix nine_point_laplacian(std::size_t m) {
  std::vector<Triplet> trip;
  trip.reserve(9 * m * m);
  const auto id = [m](std::size_t r, std::size_t c) { return r * m + c; };
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const long long rr = static_cast<long long>(r) + dr, cc = static_cast<long long>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<long long>(m) || cc >= static_cast<long long>(m)) continue;
          trip.push_back({id(r, c), id(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)),
                          (dr == 0 && dc == 0) ? 8.0 : -1.0});
        }
  return SparseMatrix::from_triplets(m * m, std::move(trip));
}

}  // namespace ascg
