#include <doctest.h>

#include <cmath>
#include <random>

#include "ascg/hscg.hpp"
#include "ascg/sstep_cg.hpp"
#include "sstep_engine.hpp"
#include "test_util.hpp"

using namespace ascg;
using testutil::instance;

TEST_CASE("initial coordinates select P and R column 0") {
  const auto c = CoordState::initial(3);
  CHECK(c.xp == Vector(7, 0.0));
  CHECK(c.pp == Vector{1, 0, 0, 0, 0, 0, 0});
  CHECK(c.rp == Vector{0, 0, 0, 0, 1, 0, 0});
  CHECK(c.j == 0);
}

TEST_CASE("recovering iterates") {
  std::mt19937_64 rng(31);
  const auto a = testutil::random_spd(25, 20.0, rng);
  const auto p = testutil::random_unit(25, rng);
  const auto r = testutil::random_unit(25, rng);
  const auto xb = testutil::random_unit(25, rng);
  const std::size_t s = 4;
  const auto blk = build_block(a, p, r, monomial_params(s), s);

  SUBCASE("selector coordinates give back the block inputs") {
    const auto rv = recover_iterates(blk, CoordState::initial(s), xb);
    CHECK(rv.x == xb);
    CHECK(rv.r == r);
    CHECK(rv.p == p);
  }
  SUBCASE("random coordinates match a plain dense product bitwise") {
    std::normal_distribution<double> g;
    CoordState c = CoordState::initial(s);
    for (auto* v : {&c.xp, &c.rp, &c.pp})
      for (auto& e : *v) e = g(rng);
    const auto rv = recover_iterates(blk, c, xb);
    for (std::size_t i = 0; i < 25; ++i) {
      double x = 0.0, rr = 0.0, pp = 0.0;
      for (std::size_t j = 0; j < 2 * s + 1; ++j) {
        x += blk.y.col(j)[i] * c.xp[j];
        rr += blk.y.col(j)[i] * c.rp[j];
        pp += blk.y.col(j)[i] * c.pp[j];
      }
      CHECK(rv.x[i] == x + xb[i]);
      CHECK(rv.r[i] == rr);
      CHECK(rv.p[i] == pp);
    }
  }
  SUBCASE("dimension errors") {
    CHECK_THROWS_AS(recover_iterates(blk, CoordState::initial(3), xb), DimensionError);
    CHECK_THROWS_AS(recover_iterates(blk, CoordState::initial(s), Vector(24, 0.0)), DimensionError);
  }
}

TEST_CASE("s = 1 on diag(1, 2) reproduces HSCG") {
  const std::vector<double> d{1.0, 2.0};
  const auto pr = instance(SparseMatrix::diagonal(d), build_rhs(2));
  SStepOptions o;
  o.s = 1;
  const auto ss = sstep_solve(pr, o);
  const auto hs = hscg_solve(pr, {});
  CHECK(ss.trace.converged());
  CHECK(ss.trace.total_iters == 2);
  CHECK(hs.trace.total_iters == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(testutil::rel_diff(ss.x[i], hs.x[i]) <= 1e-12);
    CHECK(std::fabs(ss.trace.true_resid[i] - hs.trace.true_resid[i]) <= 1e-12);
    CHECK(testutil::rel_diff(ss.coefficients.alphas[i], hs.coefficients.alphas[i]) <= 1e-12);
  }
}

TEST_CASE("identity converges in the first inner step") {
  const auto pr = instance(SparseMatrix::identity(9), build_rhs(9));
  for (BasisKind k : {BasisKind::Monomial, BasisKind::Newton}) {
    SStepOptions o;
    o.s = 10;
    o.basis = k;
    const auto res = sstep_solve(pr, o);
    CHECK(res.trace.converged());
    CHECK(res.trace.total_outer == 1);
    CHECK(res.trace.total_iters == 1);
  }
}

TEST_CASE("coefficient sequences agree with HSCG for small s") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 4; ++trial) {
    const auto a = testutil::random_spd(80, 100.0, rng);
    const auto pr = instance(a, testutil::random_unit(80, rng));
    HscgOptions ho;
    ho.eps_star = 1e-12;
    const auto hs = hscg_solve(pr, ho);
    REQUIRE(hs.coefficients.alphas.size() >= 15);
    for (std::size_t s = 1; s <= 3; ++s) {
      SStepOptions o;
      o.s = s;
      o.eps_star = 1e-12;
      const auto ss = sstep_solve(pr, o);
      REQUIRE(ss.coefficients.alphas.size() >= 15);
      for (std::size_t i = 0; i < 15; ++i) {
        CHECK(testutil::rel_diff(ss.coefficients.alphas[i], hs.coefficients.alphas[i]) <= 1e-6);
        CHECK(testutil::rel_diff(ss.coefficients.betas[i], hs.coefficients.betas[i]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("Gram residual estimate tracks the recovered residual") {
  const auto pr = make_problem(nine_point_laplacian(20), "lap20");
  const auto bounds = exact_spectral_bounds(pr.a);
  for (BasisKind kind : {BasisKind::Monomial, BasisKind::Newton, BasisKind::Chebyshev}) {
    const std::size_t s = 6;
    const auto params = make_params(kind, s, bounds);
    Vector x = pr.x0, r = pr.b, pdir = pr.b;
    std::size_t checked = 0;
    for (int k = 0; k < 5; ++k) {
      const auto blk = build_block(pr.a, pdir, r, params, s);
      REQUIRE_FALSE(blk.breakdown);
      detail::CoordIteration it(blk);
      for (std::size_t j = 0; j < s; ++j) {
        REQUIRE(it.step());
        if (blk.cond_estimates[j + 1] > 1e6) break;
        const auto rv = recover_iterates(blk, it.coords(), x);
        CHECK(testutil::rel_diff(it.residual_estimate(), la::norm2(rv.r)) <= 1e-6);
        ++checked;
      }
      auto rv = recover_iterates(blk, it.coords(), x);
      x = rv.x;
      r = rv.r;
      pdir = rv.p;
    }
    CHECK(checked >= 10);
  }
}

TEST_CASE("outer loops start every s iterations") {
  const auto pr = make_problem(nine_point_laplacian(15), "lap15");
  for (std::size_t s : {2u, 4u, 5u}) {
    SStepOptions o;
    o.s = s;
    const auto res = sstep_solve(pr, o);
    const auto& t = res.trace;
    REQUIRE(t.converged());
    CHECK(t.outer_marks.size() == t.total_outer);
    for (std::size_t k = 0; k < t.total_outer; ++k) CHECK(t.outer_marks[k] == k * s);
    CHECK(t.total_outer == (t.total_iters + s - 1) / s);
    CHECK(t.true_resid.size() == t.total_iters);
    CHECK(t.c_values.size() == t.total_iters);
    CHECK(t.true_resid.back() <= o.eps_star);
    for (std::size_t i = 1; i < t.total_iters; ++i) {
      CHECK(t.lambda_max[i] >= t.lambda_max[i - 1]);
      CHECK(t.lambda_min[i] <= t.lambda_min[i - 1]);
    }
  }
}

TEST_CASE("Newton and Chebyshev bases with exact bounds converge") {
  const auto pr = make_problem(nine_point_laplacian(20), "lap20");
  for (BasisKind kind : {BasisKind::Newton, BasisKind::Chebyshev}) {
    SStepOptions o;
    o.s = 8;
    o.basis = kind;
    o.spectral_bounds = exact_spectral_bounds(pr.a);
    const auto res = sstep_solve(pr, o);
    CHECK(res.trace.converged());
    CHECK(res.trace.outer_records.front().basis == kind);
  }
}

TEST_CASE("failures") {
  const auto pr = instance(SparseMatrix::identity(3), build_rhs(3));
  SStepOptions o;
  o.s = 0;
  CHECK_THROWS_AS(sstep_solve(pr, o), ParameterError);

  const std::vector<double> d{1.0, -1.0};
  SStepOptions o2;
  o2.s = 2;
  const auto res = sstep_solve(instance(SparseMatrix::diagonal(d), build_rhs(2)), o2);
  CHECK(res.trace.diverged());

  SStepOptions o3;
  o3.s = 2;
  o3.max_outer = 2;
  const auto lim = sstep_solve(make_problem(nine_point_laplacian(15), "lap15"), o3);
  CHECK(lim.trace.status == SolveStatus::MaxIterations);
  CHECK(lim.trace.total_outer == 2);
}

TEST_CASE("exact spectral bounds") {
  const std::vector<double> d{0.5, 3.0, 2.0};
  const auto [lo, hi] = exact_spectral_bounds(SparseMatrix::diagonal(d));
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(3.0));
}
