#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "psusy/dws.hpp"
#include "psusy/oracle.hpp"
#include "psusy/susy.hpp"

using namespace psusy;

namespace {
const double pi = std::numbers::pi;

SampledFunction tab(const Grid& g, const std::function<double(double)>& f) {
  return SampledFunction::tabulate(g, [&](double x) { return cplx(f(x), 0.0); });
}
}  // namespace

TEST_CASE("discretize: textbook stencil and hermitian flag") {
  Grid g = Grid::uniform(0.0, 4.0, 5);  // h = 1
  auto v0 = tab(g, [](double) { return 0.0; });
  auto t = discretize(v0, 1.0);
  REQUIRE(t.size() == 3);
  CHECK(t.off_diagonal == -1.0);
  for (const cplx& d : t.diagonal) CHECK(d == cplx(2.0, 0.0));
  CHECK(t.hermitian);

  auto vc = SampledFunction::tabulate(g, [](double) { return cplx(0.0, 1e-10); });
  CHECK_FALSE(discretize(vc, 1.0).hermitian);

  Grid tiny = Grid::uniform(0.0, 1.0, 4);
  auto vt = tab(tiny, [](double) { return 0.0; });
  CHECK_THROWS_AS(discretize(vt, 1.0), Error);
}

TEST_CASE("eigen_real: particle in a box") {
  Grid g = Grid::uniform(0.0, 1.0, 4001);
  auto t = discretize(tab(g, [](double) { return 0.0; }), 1.0);
  auto r = eigen_real(t, 5);
  for (int n = 1; n <= 5; ++n) {
    const double exact = n * pi * n * pi;
    CHECK(std::abs(r.eigenvalues[n - 1].real() - exact) <= 1e-5 * exact);
  }
}

TEST_CASE("eigen_real: oscillator levels") {
  // measured stencil error at 4001 nodes on [-12,12] is 2.3e-6 (2n+1) ... 1.4e-4,
  // so the first five levels sit inside 1e-4 and the sixth needs a finer grid
  Grid g = Grid::uniform(-12.0, 12.0, 4001);
  auto t = discretize(tab(g, [](double x) { return x * x; }), 1.0);
  auto r = eigen_real(t, 5);
  for (int n = 0; n < 5; ++n)
    CHECK(std::abs(r.eigenvalues[n].real() - (2.0 * n + 1.0)) <= 1e-4);

  Grid gf = Grid::uniform(-12.0, 12.0, 8001);
  auto tf = discretize(tab(gf, [](double x) { return x * x; }), 1.0);
  auto rf = eigen_real(tf, 6);
  for (int n = 0; n < 6; ++n)
    CHECK(std::abs(rf.eigenvalues[n].real() - (2.0 * n + 1.0)) <= 1e-4);
}

TEST_CASE("eigen_real refuses complex input") {
  Grid g = Grid::uniform(0.0, 1.0, 101);
  auto t = discretize(SampledFunction::tabulate(g, [](double x) { return cplx(0.0, x); }), 1.0);
  CHECK_THROWS_AS(eigen_real(t, 3), Error);
  try {
    eigen_real(t, 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongSolver);
  }
}

TEST_CASE("woods-saxon bound energies sit inside the well") {
  DwsParams p = DwsParams::make(45.7, 0.65, 1.0, DwsParams::default_radius(40.0), 0.0, 40.0);
  auto vf = dws_potential(p);
  Grid g = default_window(p, 4001);
  auto t = discretize(tab(g, vf), 1.0);
  auto r = eigen_real(t, 6);
  for (const cplx& e : r.eigenvalues) {
    CHECK(e.real() > -p.V0);
    // the lowest levels are genuinely bound; the tail of the requested batch
    // may poke into the continuum, so only check the well floor here
  }
  CHECK(r.eigenvalues.front().real() < 0.0);
}

TEST_CASE("hand-diagonalizable 2x2 matrices through the QR engine") {
  const cplx I(0.0, 1.0);
  // [[0, i],[i, 0]] has eigenvalues exactly {+i, -i}
  auto r = hessenberg_eigenvalues({0.0, I, I, 0.0}, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == -I);
  CHECK(r[1] == I);

  auto s = hessenberg_eigenvalues({cplx(2.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0),
                                   cplx(2.0, 0.0)}, 2);
  CHECK(std::abs(s[0] - 1.0) <= 1e-15);
  CHECK(std::abs(s[1] - 3.0) <= 1e-15);

  // larger symmetric tridiagonal against the closed-form Toeplitz spectrum
  const int m = 12;
  std::vector<cplx> dense(m * m, 0.0);
  for (int i = 0; i < m; ++i) {
    dense[i * m + i] = 2.0;
    if (i + 1 < m) dense[i * m + i + 1] = dense[(i + 1) * m + i] = -1.0;
  }
  auto e = hessenberg_eigenvalues(dense, m);
  for (int k = 1; k <= m; ++k) {
    const double exact = 2.0 - 2.0 * std::cos(k * pi / (m + 1));
    CHECK(std::abs(e[k - 1] - exact) <= 1e-12);
  }
}

TEST_CASE("complex spectra reproduce the characteristic polynomial") {
  // independent oracle: the tridiagonal determinant recurrence (continuant)
  // evaluated at a shift off the spectrum must equal the product of
  // (lambda_i - shift) over the full computed spectrum
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    const int m = 40 + 7 * rep;
    std::vector<cplx> diag(m);
    for (cplx& d : diag) d = cplx(2.0 * u(rng), 1.5 * u(rng));
    const double off = 0.5 + 0.4 * u(rng);

    TridiagonalHamiltonian t;
    t.grid = Grid::uniform(0.0, 1.0, m + 2);
    t.diagonal = diag;
    t.off_diagonal = off;
    t.hermitian = false;
    auto r = eigen_complex(t);
    REQUIRE(static_cast<int>(r.eigenvalues.size()) == m);

    for (const cplx shift : {cplx(4.0, 3.0), cplx(-3.5, -2.0)}) {
      cplx cont_prev = 1.0, cont = diag[0] - shift;
      for (int i = 1; i < m; ++i) {
        const cplx next = (diag[i] - shift) * cont - off * off * cont_prev;
        cont_prev = cont;
        cont = next;
      }
      cplx prod = 1.0;
      for (const cplx& lam : r.eigenvalues) prod *= lam - shift;
      CHECK(std::abs(prod - cont) <= 1e-8 * std::abs(cont));
    }
  }
}

TEST_CASE("refine_until stops gracefully at the complex size cap") {
  RefineProblem p;
  p.potential = [](double x) { return cplx(x * x, 0.3 * x); };
  p.x_min = -4.0;
  p.x_max = 4.0;
  p.n0 = 101;
  p.mu = 1.0;
  p.k = 2;
  p.complex_solver = true;
  setenv("PSUSY_MAX_QR_SIZE", "150", 1);
  auto r = refine_until(p, 1e-12, 4);
  unsetenv("PSUSY_MAX_QR_SIZE");
  CHECK_FALSE(r.converged);
  CHECK(r.eigenvalues.size() == 2);  // coarse solution still returned
  bool capped = false;
  for (const auto& w : r.warnings)
    if (w.find("refinement stopped") != std::string::npos) capped = true;
  CHECK(capped);
}

TEST_CASE("eigen_complex on a real input returns exactly real eigenvalues") {
  Grid g = Grid::uniform(0.0, 1.0, 203);
  auto t = discretize(tab(g, [](double x) { return 5.0 * x; }), 1.0);
  auto rc = eigen_complex(t);
  for (const cplx& e : rc.eigenvalues)
    CHECK(std::abs(e.imag()) <= 1e-10 * (1.0 + std::abs(e.real())));
  // dual-solver cross-check on the lowest five levels
  auto rr = eigen_real(t, 5);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(rc.eigenvalues[i].real() - rr.eigenvalues[i].real()) <=
          1e-9 * (1.0 + std::abs(rr.eigenvalues[i].real())));
}

TEST_CASE("eigen_complex: PT-symmetric shifted oscillator has a real spectrum") {
  // V = x^2 + i x; completing the square moves the line into the complex
  // plane and leaves the spectrum 2n + 1 + 1/4, real.
  Grid g = Grid::uniform(-12.0, 12.0, 801);
  auto v = SampledFunction::tabulate(g, [](double x) { return cplx(x * x, x); });
  auto t = discretize(v, 1.0);
  auto r = eigen_complex(t);
  REQUIRE(static_cast<int>(r.eigenvalues.size()) == t.size());
  for (int n = 0; n < 3; ++n) {
    const double exact = 2.0 * n + 1.0 + 0.25;
    CHECK(std::abs(r.eigenvalues[n].real() - exact) <= 5e-3);
    CHECK(std::abs(r.eigenvalues[n].imag()) <= 1e-8);
    CHECK(r.numerically_real[n]);
  }
}

TEST_CASE("size cap and the environment override") {
  Grid g = Grid::uniform(0.0, 1.0, 103);
  auto t = discretize(SampledFunction::tabulate(g, [](double x) { return cplx(0.0, x); }), 1.0);
  setenv("PSUSY_MAX_QR_SIZE", "50", 1);
  CHECK_THROWS_AS(eigen_complex(t), Error);
  try {
    eigen_complex(t);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SizeCap);
  }
  setenv("PSUSY_MAX_QR_SIZE", "200", 1);
  CHECK_NOTHROW(eigen_complex(t));
  unsetenv("PSUSY_MAX_QR_SIZE");
}

TEST_CASE("eigenvector residual for both solvers") {
  auto residual = [](const TridiagonalHamiltonian& t, const cplx& lam) {
    SampledFunction v = eigenvector(t, lam);
    double worst = 0.0, vmax = max_abs(v);
    for (int i = 1; i + 1 < t.grid.n_points; ++i) {
      const cplx hv = t.off_diagonal * (v.values[i - 1] + v.values[i + 1]) +
                      t.diagonal[i - 1] * v.values[i];
      worst = std::max(worst, std::abs(hv - lam * v.values[i]));
    }
    return worst / vmax;
  };

  // the absolute 1e-8 contract, on a grid where the eps*||H|| rounding floor
  // sits below it
  {
    Grid g = Grid::uniform(0.0, 1.0, 401);
    auto t = discretize(tab(g, [](double) { return 0.0; }), 1.0);
    auto r = eigen_real(t, 3);
    for (const cplx& lam : r.eigenvalues) CHECK(residual(t, lam) <= 1e-8);
  }

  // at finer grids the same quality holds relative to the matrix scale
  {
    Grid g = Grid::uniform(0.0, 1.0, 2001);
    auto t = discretize(tab(g, [](double) { return 0.0; }), 1.0);
    const double hnorm = 4.0 / (g.h * g.h);
    auto r = eigen_real(t, 3);
    for (const cplx& lam : r.eigenvalues)
      CHECK(residual(t, lam) <= 100.0 * 2.22e-16 * hnorm);
  }

  // complex path
  {
    Grid g = Grid::uniform(0.0, 1.0, 401);
    auto vc = SampledFunction::tabulate(g, [](double x) { return cplx(x * x * 20.0, x); });
    auto tc = discretize(vc, 1.0);
    auto rc = eigen_complex(tc);
    CHECK(residual(tc, rc.eigenvalues.front()) <= 1e-8);
  }
}

TEST_CASE("box eigenvector matches the analytic sine") {
  Grid g = Grid::uniform(0.0, 1.0, 2001);
  auto t = discretize(tab(g, [](double) { return 0.0; }), 1.0);
  auto r = eigen_real(t, 2);
  SampledFunction v = eigenvector(t, r.eigenvalues[1]);
  auto target = SampledFunction::tabulate(
      g, [](double x) { return cplx(std::sin(2.0 * pi * x), 0.0); });
  const double ov = std::abs(inner_product(v, target)) / (l2_norm(v) * l2_norm(target));
  CHECK(ov >= 1.0 - 1e-6);
}

TEST_CASE("bound states: free particle binds nothing") {
  Grid g = Grid::uniform(0.0, 10.0, 601);
  auto bs = bound_states([](double) { return cplx(0.0, 0.0); }, g, 1.0, 4);
  CHECK(bs.spectrum.eigenvalues.empty());
  CHECK(bs.eigenfunctions.empty());
}

TEST_CASE("bound states: deep square well count matches the analytic estimate") {
  // floor(L sqrt(V0) / (mu pi)) + 1 states for a deep well
  const double V0 = 25.0, L = 3.0;
  auto v = [&](double x) { return cplx(std::abs(x) < L / 2 ? -V0 : 0.0, 0.0); };
  Grid g = Grid::uniform(-12.0, 12.0, 4001);
  auto bs = bound_states(v, g, 1.0, 12);
  const int expected = static_cast<int>(L * std::sqrt(V0) / pi) + 1;
  CHECK(static_cast<int>(bs.spectrum.eigenvalues.size()) == expected);
  for (const cplx& e : bs.spectrum.eigenvalues) {
    CHECK(e.real() > -V0);
    CHECK(e.real() < 0.0);
  }
}

TEST_CASE("bound states: figure parameters bind at least the four plotted levels") {
  DwsParams p = DwsParams::make(45.7, 0.65, 1.5, DwsParams::default_radius(40.0), 0.0, 40.0);
  auto vf = dws_potential(p);
  Grid g = default_window(p, 4001);
  auto bs = bound_states([&](double x) { return cplx(vf(x), 0.0); }, g, 1.0, 8);
  CHECK(bs.spectrum.eigenvalues.size() >= 4);
  for (const auto& psi : bs.eigenfunctions)
    CHECK(std::abs(l2_norm(psi) - 1.0) <= 1e-10);
}

TEST_CASE("bound states: leaking state attaches a domain warning") {
  // shallow wide well on a domain barely larger than the well: the top state
  // has visible amplitude near the box edge
  auto v = [](double x) { return cplx(std::abs(x) < 2.0 ? -5.0 : 0.0, 0.0); };
  Grid g = Grid::uniform(-3.0, 3.0, 1201);
  auto bs = bound_states(v, g, 1.0, 6);
  REQUIRE(!bs.spectrum.eigenvalues.empty());
  CHECK(!bs.spectrum.warnings.empty());
}

TEST_CASE("refine_until: box converges at second order") {
  RefineProblem p;
  p.potential = [](double) { return cplx(0.0, 0.0); };
  p.x_min = 0.0;
  p.x_max = 1.0;
  p.n0 = 251;
  p.mu = 1.0;
  p.k = 1;
  auto r = refine_until(p, 1e-30, 4);  // unreachable tolerance: watch the history
  CHECK_FALSE(r.converged);
  REQUIRE(r.change_history.size() == 4);
  for (size_t i = 1; i < r.change_history.size(); ++i) {
    const double ratio = r.change_history[i - 1] / r.change_history[i];
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("refine_until: oscillator ground state to 1e-8 in four doublings") {
  RefineProblem p;
  p.potential = [](double x) { return cplx(x * x, 0.0); };
  p.x_min = -12.0;
  p.x_max = 12.0;
  p.n0 = 501;
  p.mu = 1.0;
  p.k = 1;
  auto r = refine_until(p, 1e-8, 4);
  CHECK(r.converged);
  CHECK(r.doublings_used <= 4);
  CHECK(std::abs(r.richardson.front().real() - 1.0) <= 1e-7);
}

TEST_CASE("refine_until: discontinuous potential converges slowly, without crashing") {
  RefineProblem p;
  p.potential = [](double x) { return cplx(x > 0.5 ? 30.0 : 0.0, 0.0); };
  p.x_min = 0.0;
  p.x_max = 1.0;
  p.n0 = 101;
  p.mu = 1.0;
  p.k = 2;
  auto r = refine_until(p, 1e-12, 3);
  CHECK_FALSE(r.converged);
  CHECK(!r.warnings.empty());
  CHECK(r.eigenvalues.size() == 2);
}

TEST_CASE("partner isospectrality for the oscillator pair") {
  Grid g = Grid::uniform(-12.0, 12.0, 4001);
  auto vm = tab(g, [](double x) { return x * x - 1.0; });
  auto vp = tab(g, [](double x) { return x * x + 1.0; });
  auto em = eigen_real(discretize(vm, 1.0), 6);
  auto ep = eigen_real(discretize(vp, 1.0), 6);
  for (int n = 0; n <= 4; ++n)
    CHECK(std::abs(ep.eigenvalues[n].real() - em.eigenvalues[n + 1].real()) <= 1e-4);
}
