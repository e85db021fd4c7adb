#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "psusy/core.hpp"

using namespace psusy;

TEST_CASE("grid construction and invariants") {
  Grid g = Grid::uniform(-2.0, 3.0, 11);
  CHECK(g.h == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.node(0) == -2.0);
  CHECK(g.node(10) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(Grid::uniform(0.0, 1.0, 2), Error);
  CHECK_THROWS_AS(Grid::uniform(1.0, 1.0, 5), Error);
  try {
    Grid::uniform(0.0, 1.0, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidGrid);
  }
}

TEST_CASE("sampled function rejects non-finite values") {
  Grid g = Grid::uniform(0.0, 1.0, 5);
  std::vector<cplx> v(5, 1.0);
  v[2] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(SampledFunction::from_values(g, v), Error);
}

TEST_CASE("physical config") {
  PhysicalConfig c = PhysicalConfig::make(2.0, 1.0);
  CHECK(c.mu() * c.M == doctest::Approx(1.0).epsilon(1e-16));
  CHECK_THROWS_AS(PhysicalConfig::make(0.0, 1.0), Error);
  CHECK_THROWS_AS(PhysicalConfig::make(-1.0, 1.0), Error);
}

TEST_CASE("derivative of a constant is zero") {
  Grid g = Grid::uniform(0.0, 5.0, 101);
  auto f = SampledFunction::tabulate(g, [](double) { return cplx(3.7, -1.2); });
  CHECK(max_abs(derivative(f)) <= 1e-12);
}

TEST_CASE("derivative is exact for linear functions") {
  Grid g = Grid::uniform(-1.0, 4.0, 57);
  auto f = SampledFunction::tabulate(g, [](double x) { return cplx(x, 0.0); });
  auto d = derivative(f);
  for (const cplx& z : d.values) CHECK(std::abs(z - 1.0) <= 1e-10);
}

TEST_CASE("derivative of sin against the analytic cosine") {
  Grid g = Grid::uniform(0.0, std::numbers::pi, 2001);
  auto f = SampledFunction::tabulate(g, [](double x) { return cplx(std::sin(x), 0.0); });
  auto d = derivative(f);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(d.values[i] - std::cos(g.node(i))));
  CHECK(worst <= 1e-5);
}

TEST_CASE("derivative requires 3 nodes") {
  Grid g = Grid::uniform(0.0, 1.0, 3);
  auto f = SampledFunction::tabulate(g, [](double x) { return cplx(x * x, 0.0); });
  CHECK_NOTHROW(derivative(f));
}

TEST_CASE("integrate: constants and linears are exact") {
  Grid g = Grid::uniform(0.0, 2.0, 401);
  auto one = SampledFunction::tabulate(g, [](double) { return cplx(1.0, 0.0); });
  CHECK(std::abs(integrate(one) - 2.0) <= 1e-12);

  Grid g01 = Grid::uniform(0.0, 1.0, 301);
  auto lin = SampledFunction::tabulate(g01, [](double x) { return cplx(x, 0.0); });
  CHECK(std::abs(integrate(lin) - 0.5) <= 1e-12);
}

TEST_CASE("integrate: gaussian against the analytic integral") {
  Grid g = Grid::uniform(-8.0, 8.0, 4001);
  auto f = SampledFunction::tabulate(g, [](double x) { return cplx(std::exp(-x * x), 0.0); });
  CHECK(std::abs(integrate(f) - std::sqrt(std::numbers::pi)) <= 1e-6);
}

TEST_CASE("integrate is linear") {
  Grid g = Grid::uniform(-1.0, 2.0, 257);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rnd = [&] {
    std::vector<cplx> v(g.n_points);
    for (cplx& z : v) z = cplx(u(rng), u(rng));
    return SampledFunction::from_values(g, v);
  };
  for (int rep = 0; rep < 10; ++rep) {
    auto f = rnd(), h = rnd();
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    std::vector<cplx> comb(g.n_points);
    for (int i = 0; i < g.n_points; ++i) comb[i] = a * f.values[i] + b * h.values[i];
    auto fc = SampledFunction::from_values(g, comb);
    CHECK(std::abs(integrate(fc) - (a * integrate(f) + b * integrate(h))) <= 1e-12);
  }
}

TEST_CASE("cumulative integral basics") {
  Grid g = Grid::uniform(0.0, 1.0, 101);
  auto zero = SampledFunction::tabulate(g, [](double) { return cplx(0.0, 0.0); });
  CHECK(max_abs(cumulative_integral(zero)) == 0.0);

  auto one = SampledFunction::tabulate(g, [](double) { return cplx(1.0, 0.0); });
  auto c = cumulative_integral(one);
  CHECK(c.values[0] == cplx(0.0, 0.0));
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(c.values[i] - g.node(i)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("cumulative integral of 2x against the analytic antiderivative") {
  Grid g = Grid::uniform(0.0, 2.0, 2001);
  auto f = SampledFunction::tabulate(g, [](double x) { return cplx(2.0 * x, 0.0); });
  auto c = cumulative_integral(f);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(c.values[i] - g.node(i) * g.node(i)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("derivative of cumulative integral recovers the integrand at O(h^2)") {
  for (int n : {501, 1001}) {
    Grid g = Grid::uniform(0.0, 3.0, n);
    auto f = SampledFunction::tabulate(
        g, [](double x) { return cplx(std::sin(2.0 * x), std::cos(x)); });
    auto back = derivative(cumulative_integral(f));
    double worst = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      worst = std::max(worst, std::abs(back.values[i] - f.values[i]));
    CHECK(worst <= 20.0 * g.h * g.h);
  }
}

TEST_CASE("operations preserve the grid of their inputs") {
  Grid g = Grid::uniform(-1.0, 1.0, 33);
  auto f = SampledFunction::tabulate(g, [](double x) { return cplx(x, x * x); });
  CHECK(derivative(f).grid == g);
  CHECK(cumulative_integral(f).grid == g);
}
