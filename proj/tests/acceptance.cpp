// Acceptance suite: every release criterion in one binary, one line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "psusy/dws.hpp"
#include "psusy/oracle.hpp"
#include "psusy/susy.hpp"
#include "test_util.hpp"

using namespace psusy;

namespace {

int failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, title,
              detail.c_str());
  if (!ok) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SampledFunction tab(const Grid& g, const std::function<double(double)>& f) {
  return SampledFunction::tabulate(g, [&](double x) { return cplx(f(x), 0.0); });
}

struct RandomDws {
  std::mt19937_64 rng{20240816};
  std::uniform_real_distribution<double> uV{10.0, 80.0}, ua{0.3, 1.2}, uq{0.5, 3.0},
      uc{-5.0, 5.0};
  DwsParams next() {
    return DwsParams::make(uV(rng), ua(rng), uq(rng), 4.0, uc(rng), 40.0);
  }
};

// ----------------------------------------------------------------- 1

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  const double pi = std::numbers::pi;

  {  // particle in a box, relative accuracy
    Grid g = Grid::uniform(0.0, 1.0, 4001);
    auto r = eigen_real(discretize(tab(g, [](double) { return 0.0; }), 1.0), 5);
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
      const double exact = n * pi * n * pi;
      worst = std::max(worst, std::abs(r.eigenvalues[n - 1].real() - exact) / exact);
    }
    ok = ok && worst <= 1e-5;
    detail += "box rel " + sci(worst);
  }
  {  // oscillator levels
    Grid g = Grid::uniform(-12.0, 12.0, 8001);
    auto r = eigen_real(discretize(tab(g, [](double x) { return x * x; }), 1.0), 6);
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n)
      worst = std::max(worst, std::abs(r.eigenvalues[n].real() - (2.0 * n + 1.0)));
    ok = ok && worst <= 1e-4;
    detail += ", osc abs " + sci(worst);
  }
  {  // complex shifted oscillator, Richardson-extrapolated dual grid
    auto solve = [&](int n) {
      Grid g = Grid::uniform(-6.5, 6.5, n);
      auto v = SampledFunction::tabulate(g, [](double x) { return cplx(x * x, x); });
      return eigen_complex(discretize(v, 1.0)).eigenvalues;
    };
    auto coarse = solve(401);
    auto fine = solve(801);
    double worst = 0.0, worst_im = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const cplx rich = (4.0 * fine[n] - coarse[n]) / 3.0;
      worst = std::max(worst, std::abs(rich.real() - (2.0 * n + 1.25)));
      worst_im = std::max(worst_im, std::abs(rich.imag()));
    }
    ok = ok && worst <= 1e-4 && worst_im <= 1e-8;
    detail += ", pt abs " + sci(worst) + " im " + sci(worst_im);
  }
  const double dt = seconds_since(t0);
  ok = ok && dt <= 30.0;
  detail += ", " + std::to_string(dt) + " s";
  report(1, "oracle validation against analytic spectra", ok, detail);
}

// ----------------------------------------------------------------- 2

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  RandomDws gen;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    DwsParams p = gen.next();
    MatchingSolution s = solve_matching(p, 1.0, Branch::Minus);
    worst = std::max(worst, matching_residual(p, 1.0, s.G1, s.G2, s.E0));
  }
  const double dt = seconds_since(t0);
  const bool ok = worst <= 1e-12 && dt <= 1.0;
  report(2, "matching conditions close under substitution", ok,
         "max residual " + sci(worst) + ", " + sci(dt) + " s");
}

// ----------------------------------------------------------------- 3

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  RandomDws gen;
  bool ok = true;
  double worst_var = 0.0, worst_r = 0.0;
  for (int i = 0; i < 20; ++i) {
    DwsParams p = gen.next();
    MatchingSolution s = solve_matching(p, 1.0, Branch::Minus);
    auto family = [&](cplx a) {
      return dws_superpotential(superpotential_params_with_g2(p, 1.0, a));
    };
    Grid g = default_window(p, 1201);
    const cplx a1 = s.G2;
    const cplx a2 = parameter_map(a1, p.alpha(), p.q);
    auto si = shape_invariance_residual(family, a1, a2, 1.0, Convention::Standard, g);
    const cplx closed = residual_R(a1, a2, p, 1.0);
    const double tol = 1e-9 * (1.0 + std::abs(si.R));
    worst_var = std::max(worst_var, si.x_variance / (1.0 + std::abs(si.R)));
    worst_r = std::max(worst_r, std::abs(si.R - closed) / (1.0 + std::abs(closed)));
    ok = ok && si.x_variance <= tol && std::abs(si.R - closed) <= tol;
  }
  const double dt = seconds_since(t0);
  ok = ok && dt <= 5.0;
  report(3, "shape invariance with the closed-form residual", ok,
         "scaled variance " + sci(worst_var) + ", R dev " + sci(worst_r) + ", " +
             sci(dt) + " s");
}

// ----------------------------------------------------------------- 4

void criterion_4() {
  RandomDws gen;
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    DwsParams p = gen.next();
    MatchingSolution s = solve_matching(p, 1.0, Branch::Minus);
    auto levels = hierarchy_energies(
        s.G2, [&](cplx a) { return parameter_map(a, p.alpha(), p.q); },
        [&](cplx a, cplx b) { return residual_R(a, b, p, 1.0); }, 12);
    ok = ok && levels[0].cumulative_energy == cplx(0.0, 0.0);
    const cplx e0 = energy_closed_form_from_g2(0, s.G2, p, 1.0);
    for (int n = 0; n <= 10; ++n) {
      const cplx en = energy_closed_form_from_g2(n, s.G2, p, 1.0);
      worst = std::max(worst, std::abs(en - (e0 + levels[n].cumulative_energy)));
    }
  }
  ok = ok && worst <= 1e-10;
  report(4, "closed-form ladder telescopes through the hierarchy", ok,
         "max deviation " + sci(worst));
}

// ----------------------------------------------------------------- 5

void criterion_5() {
  bool ok = true;
  std::string detail;
  {
    Grid g = Grid::uniform(-12.0, 12.0, 4001);
    auto em = eigen_real(discretize(tab(g, [](double x) { return x * x - 1.0; }), 1.0), 6);
    auto ep = eigen_real(discretize(tab(g, [](double x) { return x * x + 1.0; }), 1.0), 6);
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n)
      worst = std::max(worst,
                       std::abs(ep.eigenvalues[n].real() - em.eigenvalues[n + 1].real()));
    ok = ok && worst <= 1e-4;
    detail += "partner gap " + sci(worst);
  }
  {
    auto f = Superpotential::unchecked([](double x) { return cplx(x, 0.0); },
                                       [](double) { return cplx(1.0, 0.0); });
    auto ratio = [&](int n) {
      Grid g = Grid::uniform(-8.0, 8.0, n);
      auto phi = ground_state_from_superpotential(f, 1.0, g, Convention::Standard);
      return max_abs(apply_lowering(f, 1.0, phi, Convention::Standard)) / max_abs(phi);
    };
    const double r1 = ratio(1001), r2 = ratio(2001);
    const double order = std::log2(r1 / r2);
    ok = ok && order >= 1.8 && order <= 2.2;
    detail += ", annihilation order " + sci(order);
  }
  report(5, "partner isospectrality and ground-state annihilation", ok, detail);
}

// ----------------------------------------------------------------- 6

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail = "";

  auto check_scan = [&](const std::string& args, bool increasing) {
    auto r = testutil::run(args);
    if (r.exit_code != 0) {
      ok = false;
      detail += " scan-exit-" + std::to_string(r.exit_code);
      return;
    }
    auto csv = testutil::parse_csv(r.output);
    if (csv.rows.size() < 2 || csv.columns.size() < 5) {
      ok = false;
      detail += " scan-shape";
      return;
    }
    for (size_t col = 1; col <= 4; ++col) {
      double prev = increasing ? -1e300 : 1e300;
      for (const auto& row : csv.rows) {
        const double e = std::stod(row[col]);
        if (increasing ? (e <= prev) : (e >= prev)) ok = false;
        prev = e;
      }
    }
    for (const auto& row : csv.rows) {  // level ordering at every sweep point
      for (size_t col = 1; col + 1 <= 3; ++col)
        if (std::stod(row[col]) >= std::stod(row[col + 1])) ok = false;
      if (std::stod(row[4]) >= 0.0) ok = false;  // all levels negative (bound)
    }
  };

  // captioned parameters: mu = 1, a = 0.65, X0 = 1.25 A0^(1/3), V0 = 40.5 + 0.13 A0
  check_scan(
      "scan --sweep q --from 0.1 --to 3 --steps 59 --V0 45.7 --a 0.65 --A0 40 --mu 1 "
      "--n-levels 4 --no-banner",
      /*increasing=*/true);
  check_scan(
      "scan --sweep V0 --from 25 --to 80 --steps 56 --q 1.5 --a 0.65 --A0 40 --mu 1 "
      "--n-levels 4 --no-banner",
      /*increasing=*/false);

  const double dt = seconds_since(t0);
  ok = ok && dt <= 5.0;
  report(6, "figure sweeps: monotone trends and level ordering", ok,
         detail.empty() ? std::to_string(dt) + " s" : detail);
}

// ----------------------------------------------------------------- 7

void criterion_7() {
  bool ok = true;
  std::string detail;

  auto r = testutil::run(
      "verify --model dws --q 1.5 --a 0.65 --V0 45.7 --A0 40 --mu 1 --no-banner");
  if (r.exit_code != 0) {
    ok = false;
    detail += "verify exit " + std::to_string(r.exit_code);
  } else {
    auto j = nlohmann::json::parse(r.output, nullptr, false);
    if (j.is_discarded()) {
      ok = false;
      detail += "verify not json";
    } else {
      bool radicand = false, numerator = false;
      for (const auto& e : j["errata"]) {
        if (e["id"] == "matching_root_radicand" && e["quoted_residual"].get<double>() > 1e-6)
          radicand = true;
        if (e["id"] == "level_bracket_numerator" && e["quoted_residual"].get<double>() > 1e-6)
          numerator = true;
      }
      ok = ok && radicand && numerator;
      detail += std::string("radicand ") + (radicand ? "listed" : "missing") +
                ", numerator " + (numerator ? "listed" : "missing");
    }
  }

  // the literal G2 = -alpha q override must leave a loud matching residual and exit 1
  const double alq = (1.0 / 0.65) * 1.5;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,0", -alq);
  auto r2 = testutil::run(std::string("verify --model dws --q 1.5 --a 0.65 --V0 45.7 "
                                      "--A0 40 --mu 1 --no-banner --G2-override=") +
                          buf);
  bool override_ok = r2.exit_code == 1;
  if (override_ok) {
    auto j2 = nlohmann::json::parse(r2.output, nullptr, false);
    override_ok = !j2.is_discarded();
    if (override_ok) {
      bool fail_seen = false;
      for (const auto& c : j2["checks"])
        if (c["name"] == "matching_conditions")
          fail_seen = c["status"] == "fail" && c["max_residual"].get<double>() > 1e-3;
      override_ok = fail_seen;
    }
  }
  ok = ok && override_ok;
  detail += std::string(", override ") + (override_ok ? "rejected with exit 1" : "NOT rejected");
  report(7, "errata are machine-readable and the forced root is rejected", ok, detail);
}

// ----------------------------------------------------------------- 8

void criterion_8() {
  bool ok = true;
  std::string detail;
  const std::string cmds[] = {
      "scan --sweep q --from 0.1 --to 3 --steps 40 --n-levels 4 --no-banner",
      "spectrum --model dws --n-levels 4 --method both --no-banner",
      "verify --model dws --no-banner",
      "reduce --model dws --M 2 --epsilon 1 --grid 0:12:401 --no-banner",
      "wavefunction --model box --L 1 --n 1 --grid 0:1:401 --no-banner",
  };
  for (const auto& c : cmds) {
    auto a = testutil::run(c);
    auto b = testutil::run(c);
    if (a.exit_code != b.exit_code || a.output != b.output) {
      ok = false;
      detail += " differs: " + c.substr(0, c.find(' '));
    }
  }
  report(8, "byte-identical reruns with --no-banner", ok,
         detail.empty() ? "5 commands replayed" : detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (failures == 0) {
    std::printf("acceptance: all 8 criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failing\n", failures);
  return 1;
}
