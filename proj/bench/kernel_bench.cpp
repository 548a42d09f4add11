// Serial reference kernels vs their OpenMP versions.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include <omp.h>

#include "ascg/kernels.hpp"
#include "ascg/matio.hpp"

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-8s serial %9.3f ms  openmp %9.3f ms  speedup %5.2fx  %s\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t m = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 400;
  const std::size_t s = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 10;
  if (argc > 3 || m == 0 || s == 0) {
    std::fprintf(stderr, "usage: kernel_bench [grid_side > 0] [s > 0]\n");
    return 2;
  }
  const int reps = 5;

  const auto a = ascg::nine_point_laplacian(m);
  const std::size_t n = a.n;
  std::printf("9-point Laplacian %zux%zu: n = %zu, nnz = %zu, basis columns = %zu, threads = %d\n", m, m, n, a.nnz(),
              2 * s + 1, omp_get_max_threads());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ascg::Vector x(n), y1(n), y2(n);
  for (auto& v : x) v = u(rng);

  const double ts = best_of(reps, [&] { ascg::la::serial::spmv(a, x, y1); });
  const double tp = best_of(reps, [&] { ascg::la::spmv(a, x, y2); });
  report("spmv", ts, tp, y1 == y2);

  ascg::la::DenseBlock y(n, 2 * s + 1);
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (auto& v : y.col(j)) v = u(rng);
  ascg::la::SmallSymMatrix g1, g2;
  const double gs = best_of(reps, [&] { g1 = ascg::la::serial::gram(y); });
  const double gp = best_of(reps, [&] { g2 = ascg::la::gram(y); });
  report("gram", gs, gp, std::equal(g1.data().begin(), g1.data().end(), g2.data().begin()));

  ascg::Vector coeffs(y.cols());
  for (auto& v : coeffs) v = u(rng);
  const double cs = best_of(reps, [&] { ascg::la::serial::combine(y, coeffs, y1); });
  const double cp = best_of(reps, [&] { ascg::la::combine(y, coeffs, y2); });
  report("combine", cs, cp, y1 == y2);
  return 0;
}
