// Timing comparison between the serial reference kernels and the OpenMP
// versions, with a bitwise-equality column: the parallel kernels must produce
// exactly the serial results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "psusy/dws.hpp"
#include "psusy/kernels.hpp"

using namespace psusy;

namespace {

double ms(const std::chrono::steady_clock::time_point& a,
          const std::chrono::steady_clock::time_point& b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return ms(t0, t1);
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s %10.1f ms %10.1f ms   x%-5.2f  %s\n", name, serial, parallel,
              serial / parallel, identical ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("%-28s %13s %13s   %-6s  %s\n", "kernel", "serial", "parallel", "speedup",
              "check");

  // 1. Sturm bisection across eigenvalue indices
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    const int m = 60000;
    std::vector<double> diag(m);
    for (double& d : diag) d = u(rng);
    const double off = -1.3;
    const int k = 96;
    std::vector<double> a, b;
    const double ts = timed([&] { a = kernels::serial::lowest_eigenvalues(diag, off, k); });
    const double tp = timed([&] { b = kernels::par::lowest_eigenvalues(diag, off, k); });
    row("lowest_eigenvalues", ts, tp, a == b);
  }

  // 2. node-wise tabulation of the potential
  {
    DwsParams p = DwsParams::make(45.7, 0.65, 1.5, DwsParams::default_radius(40.0), 2.0, 40.0);
    auto vf = dws_potential(p);
    auto f = [&](double x) { return cplx(vf(x), 0.0); };
    Grid g = Grid::uniform(0.0, 40.0, 8'000'001);
    std::vector<cplx> a(g.n_points), b(g.n_points);
    const double ts = timed([&] { kernels::serial::tabulate(g, f, a); });
    const double tp = timed([&] { kernels::par::tabulate(g, f, b); });
    row("tabulate", ts, tp, a == b);
  }

  // 3. closed-form sweep rows
  {
    DwsParams base = DwsParams::make(45.7, 0.65, 1.5, DwsParams::default_radius(40.0), 0.0, 40.0);
    const int steps = 2'000'000;
    const int levels = 4;
    std::vector<double> a(static_cast<size_t>(steps) * levels),
        b(static_cast<size_t>(steps) * levels);
    auto fill = [&](std::vector<double>& out, bool parallel) {
#pragma omp parallel for schedule(static) if (parallel)
      for (int i = 0; i < steps; ++i) {
        const double q = 0.1 + i * (3.0 - 0.1) / (steps - 1);
        DwsParams p = DwsParams::make(base.V0, base.a, q, base.X0, base.c, base.A0);
        for (int n = 0; n < levels; ++n)
          out[static_cast<size_t>(i) * levels + n] = energy_special_case(n, p, 1.0);
      }
    };
    const double ts = timed([&] { fill(a, false); });
    const double tp = timed([&] { fill(b, true); });
    row("sweep_rows", ts, tp, a == b);
  }
  return 0;
}
