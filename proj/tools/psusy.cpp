// psusy: spectra, parameter sweeps, verification audits and wavefunction
// exports for the generalized Woods-Saxon factorization pipeline.
//
// Exit codes: 0 success / all checks pass, 1 verification failures,
//             2 bad input, 3 solver failure.
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psusy/dirac.hpp"
#include "psusy/dws.hpp"
#include "psusy/oracle.hpp"
#include "psusy/susy.hpp"

using namespace psusy;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string config_path;
  std::string model = "dws";
  double V0 = 45.7;
  double a = 0.65;
  double q = 1.5;
  double c = 0.0;
  double A0 = 40.0;
  double X0 = -1.0;  // < 0 resolves to 1.25 * A0^(1/3)
  double mu = 1.0;
  double M = 1.0;
  double epsilon = 0.0;
  std::string branch = "minus";
  std::string convention = "standard";
  std::string g2_override;  // "RE,IM"
  std::string grid = "auto";
  bool half_line = false;
  int n_levels = 4;
  std::string method = "both";
  std::string out;
  std::string format = "";
  bool no_banner = false;
  double L = 1.0;  // box length
  std::string closed_form = "special";  // special | general
  // scan
  std::string sweep = "q";
  double from = 0.1;
  double to = 3.0;
  int steps = 59;
  // wavefunction
  int level = 0;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string timestamp_utc() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

DwsParams resolve_dws(const Options& o) {
  const double x0 = o.X0 > 0.0 ? o.X0 : DwsParams::default_radius(o.A0);
  return DwsParams::make(o.V0, o.a, o.q, x0, o.c, o.A0);
}

Branch resolve_branch(const Options& o) {
  if (o.branch == "plus") return Branch::Plus;
  if (o.branch == "minus") return Branch::Minus;
  throw Error(ErrorKind::InvalidArgument, "branch must be plus or minus");
}

Convention resolve_convention(const Options& o) {
  if (o.convention == "paper") return Convention::Complexified;
  if (o.convention == "standard") return Convention::Standard;
  if (o.convention == "transpose") return Convention::Transpose;
  throw Error(ErrorKind::InvalidArgument, "convention must be paper, standard or transpose");
}

bool has_g2_override(const Options& o) { return !o.g2_override.empty(); }

cplx resolve_g2_override(const Options& o) {
  double re = 0.0, im = 0.0;
  if (std::sscanf(o.g2_override.c_str(), "%lf,%lf", &re, &im) != 2)
    throw Error(ErrorKind::InvalidArgument, "G2 override must be RE,IM");
  return {re, im};
}

Grid resolve_grid(const Options& o) {
  if (o.grid == "auto") {
    Grid g = [&] {
      if (o.model == "box") return Grid::uniform(0.0, o.L, 4001);
      if (o.model == "oscillator") return Grid::uniform(-8.0, 8.0, 2001);
      return default_window(resolve_dws(o), 4001);
    }();
    if (o.half_line && g.x_min != 0.0)
      g = Grid::uniform(0.0, std::max(g.x_max, 1.0), g.n_points);
    return g;
  }
  double lo = 0.0, hi = 0.0;
  int n = 0;
  if (std::sscanf(o.grid.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3)
    throw Error(ErrorKind::InvalidArgument, "grid must be auto or MIN:MAX:N");
  if (o.half_line) lo = 0.0;
  return Grid::uniform(lo, hi, n);
}

// ---------------------------------------------------------------- output

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void emit(const Options& o, const std::string& command,
          const std::vector<std::pair<std::string, std::string>>& banner_kv,
          const Table& table) {
  std::string buf;
  buf += "# psusy " + command + "\n";
  for (const auto& [k, v] : banner_kv) buf += "# " + k + "=" + v + "\n";
  if (!o.no_banner) buf += "# generated: " + timestamp_utc() + "\n";

  if (o.format == "json") {
    // self-contained json document instead of the commented csv
    ordered_json doc;
    doc["command"] = command;
    ordered_json cfg;
    for (const auto& [k, v] : banner_kv) cfg[k] = v;
    doc["config"] = cfg;
    if (!o.no_banner) doc["generated"] = timestamp_utc();
    doc["columns"] = table.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) rows.push_back(r);
    doc["rows"] = rows;
    buf = doc.dump(2);
    buf += "\n";
  } else {
    for (size_t i = 0; i < table.columns.size(); ++i)
      buf += table.columns[i] + (i + 1 < table.columns.size() ? "," : "");
    buf += "\n";
    for (const auto& r : table.rows) {
      for (size_t i = 0; i < r.size(); ++i) buf += r[i] + (i + 1 < r.size() ? "," : "");
      buf += "\n";
    }
  }

  if (o.out.empty()) {
    std::fwrite(buf.data(), 1, buf.size(), stdout);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + o.out);
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void emit_json(const Options& o, ordered_json j) {
  std::string buf = j.dump(2);
  buf += "\n";
  if (o.out.empty()) {
    std::fwrite(buf.data(), 1, buf.size(), stdout);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + o.out);
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

std::vector<std::pair<std::string, std::string>> model_banner(const Options& o) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("model", o.model);
  if (o.model == "box") {
    kv.emplace_back("L", fmt(o.L));
  } else if (o.model == "dws") {
    DwsParams p = resolve_dws(o);
    kv.emplace_back("V0", fmt(p.V0));
    kv.emplace_back("a", fmt(p.a));
    kv.emplace_back("q", fmt(p.q));
    kv.emplace_back("c", fmt(p.c));
    kv.emplace_back("A0", fmt(p.A0));
    kv.emplace_back("X0", fmt(p.X0));
    kv.emplace_back("branch", o.branch);
    if (has_g2_override(o)) kv.emplace_back("G2-override", o.g2_override);
  }
  kv.emplace_back("mu", fmt(o.mu));
  kv.emplace_back("convention", o.convention);
  return kv;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Options& o) {
  if (o.method != "closed-form" && o.method != "oracle" && o.method != "both")
    throw Error(ErrorKind::InvalidArgument, "method must be closed-form, oracle or both");
  if (o.n_levels < 1) throw Error(ErrorKind::InvalidArgument, "n-levels must be >= 1");
  const bool want_closed = o.method != "oracle";
  const bool want_oracle = o.method != "closed-form";

  std::vector<cplx> closed;
  std::vector<cplx> oracle_vals;
  std::vector<double> conv;

  if (o.model == "box") {
    if (want_closed) {
      const double pi = 3.14159265358979323846;
      for (int n = 1; n <= o.n_levels; ++n)
        closed.push_back(o.mu * o.mu * std::pow(n * pi / o.L, 2));
    }
  } else if (o.model == "dws") {
    DwsParams p = resolve_dws(o);
    if (want_closed) {
      if (has_g2_override(o)) {
        const cplx g2 = resolve_g2_override(o);
        for (int n = 0; n < o.n_levels; ++n)
          closed.push_back(energy_closed_form_from_g2(n, g2, p, o.mu));
      } else if (o.closed_form == "general") {
        for (int n = 0; n < o.n_levels; ++n)
          closed.push_back(energy_closed_form(n, p, o.mu, resolve_branch(o)));
      } else if (o.closed_form == "special") {
        for (int n = 0; n < o.n_levels; ++n)
          closed.push_back(energy_special_case(n, p, o.mu));
      } else {
        throw Error(ErrorKind::InvalidArgument, "closed-form must be special or general");
      }
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "spectrum supports models dws and box");
  }

  if (want_oracle) {
    Grid g = resolve_grid(o);
    std::function<cplx(double)> pot;
    if (o.model == "box")
      pot = [](double) { return cplx(0.0, 0.0); };
    else {
      auto vf = dws_potential(resolve_dws(o));
      pot = [vf](double x) { return cplx(vf(x), 0.0); };
    }
    auto solve = [&](int n) {
      Grid gg = Grid::uniform(g.x_min, g.x_max, n);
      auto t = discretize(SampledFunction::tabulate(gg, pot), o.mu);
      return eigen_real(t, std::min(o.n_levels, t.size())).eigenvalues;
    };
    oracle_vals = solve(g.n_points);
    auto coarse = solve((g.n_points + 1) / 2);
    conv.resize(oracle_vals.size(), 0.0);
    for (size_t i = 0; i < oracle_vals.size() && i < coarse.size(); ++i)
      conv[i] = std::abs(oracle_vals[i] - coarse[i]);
  }

  Table t;
  t.columns = {"n",           "E_closed_re", "E_closed_im",         "E_oracle_re",
               "E_oracle_im", "abs_dE",      "convergence_estimate"};
  for (int i = 0; i < o.n_levels; ++i) {
    const int label = o.model == "box" ? i + 1 : i;
    std::vector<std::string> r(7);
    r[0] = std::to_string(label);
    if (want_closed && i < static_cast<int>(closed.size())) {
      r[1] = fmt(closed[i].real());
      r[2] = fmt(closed[i].imag());
    }
    if (want_oracle && i < static_cast<int>(oracle_vals.size())) {
      r[3] = fmt(oracle_vals[i].real());
      r[4] = fmt(oracle_vals[i].imag());
      r[6] = fmt(conv[i]);
    }
    if (want_closed && want_oracle && i < static_cast<int>(closed.size()) &&
        i < static_cast<int>(oracle_vals.size()))
      r[5] = fmt(std::abs(closed[i] - oracle_vals[i]));
    t.rows.push_back(std::move(r));
  }

  auto kv = model_banner(o);
  kv.emplace_back("method", o.method);
  kv.emplace_back("n-levels", std::to_string(o.n_levels));
  if (o.model == "dws" && o.method != "oracle") kv.emplace_back("closed-form", o.closed_form);
  if (o.model == "dws" && has_g2_override(o)) {
    DwsParams p = resolve_dws(o);
    DwsSuperpotentialParams sp = superpotential_params_with_g2(p, o.mu, resolve_g2_override(o));
    kv.emplace_back("G2-override-matching-residual",
                    fmt(matching_residual(p, o.mu, sp.G1, sp.G2, -o.mu * o.mu * sp.G1 * sp.G1)));
  }
  if (want_oracle) {
    Grid g = resolve_grid(o);
    kv.emplace_back("grid", fmt(g.x_min) + ":" + fmt(g.x_max) + ":" + std::to_string(g.n_points));
  }
  emit(o, "spectrum", kv, t);
  return 0;
}

// ---------------------------------------------------------------- scan

int cmd_scan(const Options& o) {
  if (o.sweep != "q" && o.sweep != "a" && o.sweep != "V0")
    throw Error(ErrorKind::InvalidArgument, "sweep must be one of q, a, V0");
  if (!(o.from < o.to)) throw Error(ErrorKind::InvalidArgument, "scan needs from < to");
  if (o.steps < 2) throw Error(ErrorKind::InvalidArgument, "scan needs steps >= 2");
  if (o.model != "dws") throw Error(ErrorKind::InvalidArgument, "scan supports the dws model");
  if (o.n_levels < 1) throw Error(ErrorKind::InvalidArgument, "n-levels must be >= 1");
  if ((o.sweep == "q" || o.sweep == "a") && !(o.from > 0.0))
    throw Error(ErrorKind::InvalidArgument, "sweep over " + o.sweep + " needs from > 0");

  DwsParams base = resolve_dws(o);
  const int steps = o.steps;
  std::vector<std::vector<std::string>> rows(steps);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < steps; ++i) {
    const double value = o.from + i * (o.to - o.from) / (steps - 1);
    DwsParams p = base;
    if (o.sweep == "q")
      p = DwsParams::make(base.V0, base.a, value, base.X0, base.c, base.A0);
    else if (o.sweep == "a")
      p = DwsParams::make(base.V0, value, base.q, base.X0, base.c, base.A0);
    else
      p = DwsParams::make(value, base.a, base.q, base.X0, base.c, base.A0);
    std::vector<std::string> row(1 + o.n_levels);
    row[0] = fmt(value);
    for (int n = 0; n < o.n_levels; ++n) row[1 + n] = fmt(energy_special_case(n, p, o.mu));
    rows[i] = std::move(row);
  }

  Table t;
  t.columns.push_back(o.sweep);
  for (int n = 0; n < o.n_levels; ++n) t.columns.push_back("E_" + std::to_string(n));
  t.rows = std::move(rows);

  auto kv = model_banner(o);
  kv.emplace_back("sweep", o.sweep);
  kv.emplace_back("from", fmt(o.from));
  kv.emplace_back("to", fmt(o.to));
  kv.emplace_back("steps", std::to_string(o.steps));
  kv.emplace_back("n-levels", std::to_string(o.n_levels));
  emit(o, "scan", kv, t);
  return 0;
}

// ---------------------------------------------------------------- verify

ordered_json cnum(const cplx& z) {
  return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

struct CheckList {
  ordered_json checks = ordered_json::array();
  bool all_pass = true;

  void pass_fail(const std::string& name, bool ok, ordered_json detail) {
    ordered_json entry;
    entry["name"] = name;
    entry["status"] = ok ? "pass" : "fail";
    for (auto& [k, v] : detail.items()) entry[k] = v;
    checks.push_back(entry);
    all_pass = all_pass && ok;
  }

  void report(const std::string& name, ordered_json detail) {
    ordered_json entry;
    entry["name"] = name;
    entry["status"] = "report";
    for (auto& [k, v] : detail.items()) entry[k] = v;
    checks.push_back(entry);
  }
};

// order-of-accuracy measurement of the lowering-operator kernel property
ordered_json kernel_check(const Superpotential& f, double mu, const Grid& coarse,
                          Convention conv, bool& ok) {
  auto ratio = [&](const Grid& g) {
    auto phi = ground_state_from_superpotential(f, mu, g, conv);
    return max_abs(apply_lowering(f, mu, phi, conv)) / max_abs(phi);
  };
  const double r1 = ratio(coarse);
  Grid fine = Grid::uniform(coarse.x_min, coarse.x_max, 2 * coarse.n_points - 1);
  const double r2 = ratio(fine);
  ordered_json j;
  j["ratio_coarse"] = r1;
  j["ratio_fine"] = r2;
  if (r1 <= 1e-10 && r2 <= 1e-10) {
    ok = true;
    j["note"] = "annihilation at rounding level";
    return j;
  }
  const double order = std::log2(r1 / r2);
  j["measured_order"] = order;
  ok = order >= 1.8 && order <= 2.2;
  return j;
}

int cmd_verify_oscillator(const Options& o) {
  CheckList cl;
  const double mu = o.mu;
  const double omega = 1.0;
  auto f = Superpotential::unchecked([omega](double x) { return cplx(omega * x, 0.0); },
                                     [omega](double) { return cplx(omega, 0.0); },
                                     cplx(omega, 0.0));
  Grid g = resolve_grid(o);
  auto v = SampledFunction::tabulate(
      g, [omega](double x) { return cplx(omega * omega * x * x, 0.0); });
  const cplx e0 = mu * omega;

  // nonlinear first-order relation, standard rule
  const double ric = riccati_residual(f, v, e0, mu, Convention::Standard);
  cl.pass_fail("riccati", ric <= 1e-10, {{"residual", ric}, {"tolerance", 1e-10}});

  auto tests = default_test_functions(g);
  auto audit = factorization_audit(f, mu, v, e0, tests);
  ordered_json residuals;
  double std_res = 0.0;
  for (const auto& e : audit.by_residual) {
    residuals[convention_name(e.convention)] = e.residual;
    if (e.convention == Convention::Standard) std_res = e.residual;
  }
  cl.pass_fail("factorization", std_res <= 200.0 * g.h * g.h,
               {{"residuals", residuals}, {"best", convention_name(audit.best())}});

  bool kernel_ok = false;
  ordered_json kj = kernel_check(f, mu, g, Convention::Standard, kernel_ok);
  cl.pass_fail("ground_state_kernel", kernel_ok, kj);

  auto family = [mu, omega](cplx w) {
    return Superpotential::unchecked([w](double x) { return w * x; },
                                     [w](double) { return w; }, w);
  };
  auto si = shape_invariance_residual(family, omega, omega, mu, Convention::Standard, g);
  const cplx r_expected = 2.0 * mu * omega;
  cl.pass_fail("shape_invariance",
               si.x_variance <= 1e-9 * (1.0 + std::abs(si.R)) &&
                   std::abs(si.R - r_expected) <= 1e-9,
               {{"x_variance", si.x_variance},
                {"R_extracted", cnum(si.R)},
                {"R_expected", cnum(r_expected)}});

  auto levels = hierarchy_energies(
      omega, [](cplx w) { return w; },
      [mu](cplx, cplx w) { return 2.0 * mu * w; }, 6);
  double worst = 0.0;
  for (const auto& lv : levels)
    worst = std::max(worst,
                     std::abs(lv.cumulative_energy - 2.0 * mu * omega * (lv.k - 1.0)));
  cl.pass_fail("hierarchy_telescoping", worst <= 1e-10,
               {{"max_deviation", worst}, {"tolerance", 1e-10}});

  auto sc = supercharge_algebra_check(f, mu, g, tests, Convention::Standard);
  cl.pass_fail("supercharge_algebra",
               sc.q_squared_max == 0.0 && sc.q_dag_squared_max == 0.0 &&
                   sc.anticommutator_residual <= 1e-8,
               {{"Q_squared_max", sc.q_squared_max},
                {"Qdag_squared_max", sc.q_dag_squared_max},
                {"anticommutator_residual", sc.anticommutator_residual}});

  // partner isospectrality against the spectral oracle
  {
    Grid gg = Grid::uniform(-12.0, 12.0, 4001);
    auto pp = partner_potentials(f, mu, Convention::Standard, 0.0, gg);
    auto em = eigen_real(discretize(pp.v_minus, mu), 6);
    auto ep = eigen_real(discretize(pp.v_plus, mu), 6);
    double gap = 0.0;
    for (int n = 0; n <= 4; ++n)
      gap = std::max(gap, std::abs(ep.eigenvalues[n].real() - em.eigenvalues[n + 1].real()));
    cl.pass_fail("isospectrality", gap <= 1e-4, {{"max_gap", gap}, {"tolerance", 1e-4}});
  }

  ordered_json out;
  out["command"] = "verify";
  out["model"] = "oscillator";
  if (!o.no_banner) out["generated"] = timestamp_utc();
  out["checks"] = cl.checks;
  out["errata"] = ordered_json::array();
  out["hard_checks_passed"] = cl.all_pass;
  emit_json(o, out);
  return cl.all_pass ? 0 : 1;
}

int cmd_verify_dws(const Options& o) {
  CheckList cl;
  DwsParams p = resolve_dws(o);
  const double mu = o.mu;
  const Branch branch = resolve_branch(o);
  Grid g = resolve_grid(o);

  // --- matching conditions
  cplx G1, G2, E0;
  if (has_g2_override(o)) {
    G2 = resolve_g2_override(o);
    DwsSuperpotentialParams sp = superpotential_params_with_g2(p, mu, G2);
    G1 = sp.G1;
    E0 = -mu * mu * G1 * G1;
  } else {
    MatchingSolution s = solve_matching(p, mu, branch);
    G1 = s.G1;
    G2 = s.G2;
    E0 = s.E0;
  }
  const double match_res = matching_residual(p, mu, G1, G2, E0);
  cl.pass_fail("matching_conditions", match_res <= 1e-12,
               {{"max_residual", match_res},
                {"tolerance", 1e-12},
                {"G1", cnum(G1)},
                {"G2", cnum(G2)},
                {"E0", cnum(E0)},
                {"forced_G2", has_g2_override(o)}});

  DwsSuperpotentialParams sp;
  sp.G1 = G1;
  sp.G2 = G2;
  sp.alpha = p.alpha();
  sp.q = p.q;
  sp.X0 = p.X0;
  sp.mu = mu;
  sp.branch = branch;
  Superpotential f = dws_superpotential(sp);
  auto vf = dws_potential(p);
  auto v = SampledFunction::tabulate(g, [&](double x) { return cplx(vf(x), 0.0); });

  // --- nonlinear first-order relation per convention (report)
  {
    ordered_json res;
    double best = 1e300;
    std::string best_name;
    for (Convention conv :
         {Convention::Complexified, Convention::Standard, Convention::Transpose}) {
      const double r = riccati_residual(f, v, E0, mu, conv);
      res[convention_name(conv)] = r;
      if (r < best) {
        best = r;
        best_name = convention_name(conv);
      }
    }
    cl.report("riccati", {{"residuals", res}, {"best", best_name}});
  }

  // --- factorization audit (report: no convention composes onto this V when
  //     the matched G's are complex)
  {
    Grid ga = Grid::uniform(g.x_min, g.x_max, 1201);
    auto va = SampledFunction::tabulate(ga, [&](double x) { return cplx(vf(x), 0.0); });
    auto tests = default_test_functions(ga);
    auto audit = factorization_audit(f, mu, va, E0, tests);
    ordered_json res;
    for (const auto& e : audit.by_residual) res[convention_name(e.convention)] = e.residual;
    cl.report("factorization", {{"residuals", res}, {"best", convention_name(audit.best())}});
  }

  // --- lowering-operator kernel property
  try {
    bool ok = false;
    ordered_json kj = kernel_check(f, mu, Grid::uniform(g.x_min, g.x_max, 2001),
                                   Convention::Standard, ok);
    cl.pass_fail("ground_state_kernel", ok, kj);
  } catch (const Error& e) {
    // a non-normalizable zero mode has no testable kernel state on this window
    if (e.kind() != ErrorKind::NonNormalizableState) throw;
    cl.report("ground_state_kernel", {{"note", e.what()}});
  }

  // --- shape invariance
  {
    auto family = [&](cplx a) {
      return dws_superpotential(superpotential_params_with_g2(p, mu, a));
    };
    const cplx a1 = G2;
    const cplx a2 = parameter_map(a1, p.alpha(), p.q);
    auto si = shape_invariance_residual(family, a1, a2, mu, Convention::Standard, g);
    const cplx closed = residual_R(a1, a2, p, mu);
    const double tol = 1e-9 * (1.0 + std::abs(si.R));
    cl.pass_fail("shape_invariance",
                 si.x_variance <= tol && std::abs(si.R - closed) <= tol,
                 {{"x_variance", si.x_variance},
                  {"tolerance", tol},
                  {"R_extracted", cnum(si.R)},
                  {"R_closed_form", cnum(closed)}});
  }

  // --- hierarchy telescoping against the closed-form ladder
  {
    auto levels = hierarchy_energies(
        G2, [&](cplx a) { return parameter_map(a, p.alpha(), p.q); },
        [&](cplx a, cplx b) { return residual_R(a, b, p, mu); }, 12);
    double worst = 0.0;
    const cplx e_base = energy_closed_form_from_g2(0, G2, p, mu);
    for (int n = 0; n <= 10; ++n) {
      const cplx en = energy_closed_form_from_g2(n, G2, p, mu);
      worst = std::max(worst, std::abs(en - (e_base + levels[n].cumulative_energy)));
    }
    const bool level0_zero = levels[0].cumulative_energy == cplx(0.0, 0.0);
    cl.pass_fail("hierarchy_telescoping", worst <= 1e-10 && level0_zero,
                 {{"max_deviation", worst},
                  {"tolerance", 1e-10},
                  {"shifted_ground_level", cnum(levels[0].cumulative_energy)}});
  }

  // --- supercharge algebra
  {
    Grid gs = Grid::uniform(g.x_min, g.x_max, 1201);
    auto tests = default_test_functions(gs);
    auto sc = supercharge_algebra_check(f, mu, gs, tests, resolve_convention(o));
    cl.pass_fail("supercharge_algebra",
                 sc.q_squared_max == 0.0 && sc.q_dag_squared_max == 0.0 &&
                     sc.anticommutator_residual <= 1e-8,
                 {{"Q_squared_max", sc.q_squared_max},
                  {"Qdag_squared_max", sc.q_dag_squared_max},
                  {"anticommutator_residual", sc.anticommutator_residual}});
  }

  // --- closed form against the spectral oracle (report: the closed forms do
  //     not reproduce the oracle of the real potential; the gap is the point)
  {
    auto t = discretize(v, mu);
    const int k = std::min(4, t.size());
    auto oracle = eigen_real(t, k);
    ordered_json levels = ordered_json::array();
    for (int n = 0; n < k; ++n) {
      ordered_json row;
      row["n"] = n;
      row["oracle"] = cnum(oracle.eigenvalues[n]);
      try {
        row["closed_general"] = cnum(energy_closed_form_from_g2(n, G2, p, mu));
      } catch (const Error&) {
        row["closed_general"] = nullptr;
      }
      row["closed_special"] = energy_special_case(n, p, mu);
      levels.push_back(row);
    }
    double ov = 0.0;
    try {
      auto closed0 = dws_ground_state(sp, g);
      auto psi0 = eigenvector(t, oracle.eigenvalues.front());
      ov = std::abs(inner_product(closed0, psi0)) / (l2_norm(closed0) * l2_norm(psi0));
    } catch (const Error&) {
      ov = -1.0;  // closed form not normalizable on this window
    }
    cl.report("oracle_comparison",
              {{"levels", levels}, {"ground_state_overlap_closed_vs_oracle", ov}});
  }

  // --- errata: quoted formula variants exercised by this run, with the
  //     residual each leaves under substitution
  ordered_json errata = ordered_json::array();
  {
    const double half = 0.5 * p.alpha() * p.q;
    double quoted_best = 1e300;
    for (double sign : {1.0, -1.0}) {
      const cplx root = std::sqrt(cplx(half * half + p.c / (mu * mu), 0.0));
      const cplx g2q = -cplx(0.0, 1.0) * half + sign * root;
      if (std::abs(g2q) == 0.0) continue;
      DwsSuperpotentialParams spq = superpotential_params_with_g2(p, mu, g2q);
      const cplx e0q = -mu * mu * spq.G1 * spq.G1;
      quoted_best = std::min(quoted_best, matching_residual(p, mu, spq.G1, g2q, e0q));
    }
    errata.push_back(
        {{"id", "matching_root_radicand"},
         {"description",
          "quoted root G2 = -i a q/2 +- sqrt((a q/2)^2 + c/mu^2) fails the matching "
          "conditions; the consistent radicand is c/mu^2 - (a q/2)^2"},
         {"quoted_residual", quoted_best},
         {"adopted_residual", match_res}});
  }
  {
    // quoted ladder bracket with numerator 1 instead of (-V0 + c/q): the
    // shifted ladder no longer starts at zero
    auto bracket_quoted = [&](cplx a) {
      const cplx b = 1.0 / (2.0 * mu * mu * a) - a / (2.0 * p.q);
      return mu * mu * b * b;
    };
    auto bracket = [&](cplx a) {
      const double kappa = -p.V0 + p.c / p.q;
      const cplx b = kappa / (2.0 * mu * mu * a) - a / (2.0 * p.q);
      return mu * mu * b * b;
    };
    const double quoted = std::abs(bracket(G2) - bracket_quoted(G2));
    errata.push_back(
        {{"id", "level_bracket_numerator"},
         {"description",
          "quoted level formula carries numerator 1 in the second bracket; reading it "
          "as (-V0 + c/q) makes the shifted ladder start at zero"},
         {"quoted_residual", quoted},
         {"adopted_residual", 0.0}});
  }
  try {
    // quoted closed-form ground state denominator e^{-a xi} + q versus the
    // antiderivative-consistent q + e^{+a xi}
    Grid gg = Grid::uniform(g.x_min, g.x_max, 2001);
    auto quad = ground_state_from_superpotential(f, mu, gg, Convention::Standard);
    auto ratio_spread = [&](bool quoted_form) {
      std::vector<cplx> ratio(gg.n_points);
      for (int i = 0; i < gg.n_points; ++i) {
        const double xi = gg.node(i) - p.X0;
        const double base = quoted_form
                                ? std::exp(p.alpha() * xi) / (std::exp(-p.alpha() * xi) + p.q)
                                : 1.0 / (1.0 + p.q * std::exp(-p.alpha() * xi));
        const cplx val =
            std::exp(G1 * gg.node(i)) *
            std::exp((G2 / (p.alpha() * p.q)) * std::log(cplx(base, 0.0)));
        ratio[i] = val / quad.values[i];
      }
      cplx mean = 0.0;
      for (const cplx& r : ratio) mean += r;
      mean /= static_cast<double>(gg.n_points);
      double dev = 0.0;
      for (const cplx& r : ratio) dev = std::max(dev, std::abs(r - mean));
      return dev / std::abs(mean);
    };
    errata.push_back(
        {{"id", "ground_state_log_argument"},
         {"description",
          "quoted ground-state factor (e^{a xi}/(e^{-a xi}+q))^{G2/(a q)} is not an "
          "antiderivative of the superpotential; the consistent base is "
          "e^{a xi}/(q + e^{a xi})"},
         {"quoted_residual", ratio_spread(true)},
         {"adopted_residual", ratio_spread(false)}});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonNormalizableState) throw;
    errata.push_back({{"id", "ground_state_log_argument"},
                      {"description",
                       "ground-state comparison skipped: the zero mode is not normalizable "
                       "on this window for the configured G2"},
                      {"note", e.what()}});
  }
  {
    // quoted partner-potential expansion carries -2 G2^2/q in the single-power
    // coefficient; the matching relation gives -G2^2/q. The quoted forms carry
    // no additive constant: their constant term is mu^2 G1^2 from F^2 itself.
    Grid gg = Grid::uniform(g.x_min, g.x_max, 1501);
    auto pp = partner_potentials(f, mu, Convention::Complexified, 0.0, gg);
    const double kappa = -p.V0 + p.c / p.q;
    auto expansion = [&](bool quoted_form) {
      double worst = 0.0;
      for (int i = 0; i < gg.n_points; ++i) {
        const double w = 1.0 / (p.q + std::exp(p.alpha() * (gg.node(i) - p.X0)));
        const cplx coeff1 = kappa / (mu * mu) - (quoted_form ? 2.0 : 1.0) * G2 * G2 / p.q;
        const cplx val =
            mu * mu *
            (G1 * G1 + (coeff1 + cplx(0.0, 1.0) * p.alpha() * G2) * w +
             (G2 * G2 - cplx(0.0, 1.0) * p.alpha() * p.q * G2) * w * w);
        worst = std::max(worst, std::abs(val - pp.v_plus.values[i]));
      }
      return worst;
    };
    errata.push_back(
        {{"id", "partner_expansion_coefficient"},
         {"description",
          "quoted expanded partner potentials carry -2 G2^2/q in the single-power "
          "coefficient; substituting the matching relation gives -G2^2/q"},
         {"quoted_residual", expansion(true)},
         {"adopted_residual", expansion(false)}});
  }
  {
    // the special-case spectrum formula against the general ladder evaluated at
    // its own premises (c = 0, forced G2 = -alpha q)
    DwsParams p0 = DwsParams::make(p.V0, p.a, p.q, p.X0, 0.0, p.A0);
    const cplx forced = -p0.alpha() * p0.q;
    DwsSuperpotentialParams spf = superpotential_params_with_g2(p0, mu, forced);
    const double quoted =
        std::abs(energy_special_case(0, p0, mu) -
                 energy_closed_form_from_g2(0, forced, p0, mu));
    errata.push_back(
        {{"id", "special_case_vs_general"},
         {"description",
          "the plotted special-case spectrum disagrees with the general ladder at its "
          "own premises (c = 0, G2 = -alpha q), which themselves fail the matching "
          "conditions"},
         {"quoted_residual", quoted},
         {"forced_G2_matching_residual",
          matching_residual(p0, mu, spf.G1, forced, -mu * mu * spf.G1 * spf.G1)}});
  }
  {
    // literal first-order pair does not compose to the second-order operator
    Grid ga = Grid::uniform(g.x_min, g.x_max, 1201);
    auto va = SampledFunction::tabulate(ga, [&](double x) { return cplx(vf(x), 0.0); });
    auto audit = factorization_audit(f, mu, va, E0, default_test_functions(ga));
    double complexified = 0.0, standard = 0.0;
    for (const auto& e : audit.by_residual) {
      if (e.convention == Convention::Complexified) complexified = e.residual;
      if (e.convention == Convention::Standard) standard = e.residual;
    }
    errata.push_back(
        {{"id", "operator_composition"},
         {"description",
          "the quoted lowering/raising pair (mu d/dx + iF, -i mu d/dx + F) leaves a "
          "first-order term when composed; the standard pair composes, though onto "
          "F^2 -+ mu F' rather than this potential's F^2 -+ i mu F'"},
         {"quoted_residual", complexified},
         {"adopted_residual", standard}});
  }

  ordered_json out;
  out["command"] = "verify";
  out["model"] = "dws";
  if (!o.no_banner) out["generated"] = timestamp_utc();
  ordered_json cfg;
  for (const auto& [k, val] : model_banner(o)) cfg[k] = val;
  out["config"] = cfg;
  out["checks"] = cl.checks;
  out["errata"] = errata;
  out["hard_checks_passed"] = cl.all_pass;
  emit_json(o, out);
  return cl.all_pass ? 0 : 1;
}

int cmd_verify(const Options& o) {
  if (o.format == "csv")
    throw Error(ErrorKind::InvalidArgument, "verify emits a json report");
  if (o.model == "oscillator") return cmd_verify_oscillator(o);
  if (o.model == "dws") return cmd_verify_dws(o);
  throw Error(ErrorKind::InvalidArgument, "verify supports models dws and oscillator");
}

// ---------------------------------------------------------------- wavefunction

int cmd_wavefunction(const Options& o) {
  if (o.level < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  Grid g = resolve_grid(o);

  SampledFunction psi = SampledFunction::tabulate(g, [](double) { return cplx(0.0, 0.0); });
  std::string method;

  if (o.model == "box") {
    if (o.level < 1) throw Error(ErrorKind::InvalidArgument, "box levels are n = 1, 2, ...");
    auto t = discretize(SampledFunction::tabulate(g, [](double) { return cplx(0.0, 0.0); }),
                        o.mu);
    auto r = eigen_real(t, o.level);
    psi = eigenvector(t, r.eigenvalues[o.level - 1]);
    method = "oracle";
  } else if (o.model == "dws") {
    DwsParams p = resolve_dws(o);
    const bool closed_requested = o.method != "oracle";
    if (o.level == 0 && closed_requested) {
      DwsSuperpotentialParams sp =
          has_g2_override(o) ? superpotential_params_with_g2(p, o.mu, resolve_g2_override(o))
                             : make_superpotential_params(p, o.mu, resolve_branch(o));
      psi = dws_ground_state(sp, g);
      method = "closed-form";
    } else {
      auto vf = dws_potential(p);
      auto bs = bound_states([&](double x) { return cplx(vf(x), 0.0); }, g, o.mu,
                             o.level + 1);
      if (static_cast<int>(bs.eigenfunctions.size()) <= o.level)
        throw Error(ErrorKind::InvalidArgument,
                    "level " + std::to_string(o.level) + " does not exist: only " +
                        std::to_string(bs.eigenfunctions.size()) + " bound states");
      psi = bs.eigenfunctions[o.level];
      method = "oracle";
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "wavefunction supports models dws and box");
  }

  Table t;
  t.columns = {"x", "psi_re", "psi_im", "abs2"};
  for (int i = 0; i < g.n_points; ++i) {
    t.rows.push_back({fmt(g.node(i)), fmt(psi.values[i].real()), fmt(psi.values[i].imag()),
                      fmt(std::norm(psi.values[i]))});
  }
  auto kv = model_banner(o);
  kv.emplace_back("n", std::to_string(o.level));
  kv.emplace_back("wavefunction-method", method);
  kv.emplace_back("norm", fmt(l2_norm(psi)));
  kv.emplace_back("grid", fmt(g.x_min) + ":" + fmt(g.x_max) + ":" + std::to_string(g.n_points));
  emit(o, "wavefunction", kv, t);
  return 0;
}

// ---------------------------------------------------------------- reduce

int cmd_reduce(const Options& o) {
  PhysicalConfig cfg = PhysicalConfig::make(o.M, o.epsilon);  // rejects M = 0
  Grid g = resolve_grid(o);

  std::function<cplx(double)> nu, dnu;
  if (o.model == "dws") {
    DwsParams p = resolve_dws(o);
    auto vf = dws_potential(p);
    const double alpha = p.alpha(), q = p.q, X0 = p.X0, V0 = p.V0, cc = p.c;
    nu = [vf](double x) { return cplx(vf(x), 0.0); };
    dnu = [=](double x) {
      const double w = 1.0 / (q + std::exp(alpha * (x - X0)));
      const double s = 1.0 / (1.0 + q * std::exp(-alpha * (x - X0)));
      return cplx((-V0 + 2.0 * cc * w) * (-alpha * s * w), 0.0);
    };
  } else if (o.model == "box") {
    nu = [](double) { return cplx(0.0, 0.0); };
    dnu = [](double) { return cplx(0.0, 0.0); };
  } else {
    throw Error(ErrorKind::InvalidArgument, "reduce supports models dws and box");
  }

  auto nu_s = SampledFunction::tabulate(g, nu);
  auto u = effective_potential(g, nu, dnu, cfg);

  Table t;
  t.columns = {"x", "nu", "U_re", "U_im"};
  for (int i = 0; i < g.n_points; ++i)
    t.rows.push_back({fmt(g.node(i)), fmt(nu_s.values[i].real()), fmt(u.values[i].real()),
                      fmt(u.values[i].imag())});

  auto kv = model_banner(o);
  kv.emplace_back("epsilon", fmt(cfg.epsilon));
  kv.emplace_back("M", fmt(cfg.M));
  kv.emplace_back("reduced-mu", fmt(cfg.mu()));
  kv.emplace_back("grid", fmt(g.x_min) + ":" + fmt(g.x_max) + ":" + std::to_string(g.n_points));
  emit(o, "reduce", kv, t);
  return 0;
}

// ---------------------------------------------------------------- wiring

void add_shared(CLI::App* cmd, Options& o) {
  auto opt = [](CLI::Option* p) { return p->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
  opt(cmd->add_option("--config", o.config_path, "flat key=value config file; flags win"));
  opt(cmd->add_option("--model", o.model, "dws | box | oscillator"));
  opt(cmd->add_option("--V0", o.V0, "well depth"));
  opt(cmd->add_option("--a", o.a, "surface diffuseness"));
  opt(cmd->add_option("--q", o.q, "deformation"));
  opt(cmd->add_option("--c", o.c, "squared-term coupling"));
  opt(cmd->add_option("--A0", o.A0, "mass number"));
  opt(cmd->add_option("--X0", o.X0, "center; defaults to 1.25*A0^(1/3)"));
  opt(cmd->add_option("--mu", o.mu, "inverse mass"));
  opt(cmd->add_option("--M", o.M, "mass of the two-component reduction"));
  opt(cmd->add_option("--epsilon", o.epsilon, "energy parameter of the reduction"));
  opt(cmd->add_option("--branch", o.branch, "matching root branch: plus | minus"));
  opt(cmd->add_option("--convention", o.convention,
                      "factorization sign rules: paper | standard | transpose"));
  opt(cmd->add_option("--G2-override", o.g2_override, "force G2 as RE,IM"));
  opt(cmd->add_option("--grid", o.grid, "auto or MIN:MAX:N"));
  cmd->add_flag("--half-line", o.half_line, "pin the left grid edge to 0");
  opt(cmd->add_option("--n-levels", o.n_levels, "number of levels"));
  opt(cmd->add_option("--method", o.method, "closed-form | oracle | both"));
  opt(cmd->add_option("--out", o.out, "output path (default stdout)"));
  opt(cmd->add_option("--format", o.format, "csv | json"));
  cmd->add_flag("--no-banner", o.no_banner, "suppress the timestamp comment line");
  opt(cmd->add_option("--L", o.L, "box length"));
  opt(cmd->add_option("--closed-form", o.closed_form,
                      "dws closed-form column: special | general"));
  opt(cmd->add_option("--sweep", o.sweep, "swept variable: q | a | V0"));
  opt(cmd->add_option("--from", o.from, "sweep start"));
  opt(cmd->add_option("--to", o.to, "sweep end"));
  opt(cmd->add_option("--steps", o.steps, "sweep points"));
  opt(cmd->add_option("--n", o.level, "wavefunction level"));
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidGrid:
    case ErrorKind::GridMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NonFiniteValues:
    case ErrorKind::MasslessCase:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-Hermitian factorization toolkit for the generalized Woods-Saxon family"};
  app.require_subcommand(1);

  Options o;
  CLI::App* c_spectrum = app.add_subcommand("spectrum", "closed-form and oracle level energies");
  CLI::App* c_scan = app.add_subcommand("scan", "parameter sweep of the special-case spectrum");
  CLI::App* c_verify = app.add_subcommand("verify", "consistency audit (json report)");
  CLI::App* c_wave = app.add_subcommand("wavefunction", "export one level's wavefunction");
  CLI::App* c_reduce = app.add_subcommand("reduce", "effective complex potential of the reduction");
  for (CLI::App* c : {c_spectrum, c_scan, c_verify, c_wave, c_reduce}) add_shared(c, o);

  // merge a config file (key=value per line, # comments) ahead of the flags,
  // so that later command-line values win via TakeLast
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  size_t subcmd_pos = args.size();
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    if (subcmd_pos == args.size())
      for (const char* name : {"spectrum", "scan", "verify", "wavefunction", "reduce"})
        if (args[i] == name) subcmd_pos = i;
  }
  if (!config_path.empty() && subcmd_pos == args.size()) {
    std::cerr << "psusy: --config requires a subcommand\n";
    return 2;
  }
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "psusy: cannot read config file " << config_path << "\n";
      return 2;
    }
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(f, line)) {
      const size_t h = line.find('#');
      if (h != std::string::npos) line = line.substr(0, h);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
        line.pop_back();
      size_t b = 0;
      while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
      line = line.substr(b);
      if (line.empty()) continue;
      const size_t eq = line.find('=');
      if (eq == std::string::npos) {
        std::cerr << "psusy: bad config line (need key=value): " << line << "\n";
        return 2;
      }
      injected.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
    }
    args.insert(args.begin() + subcmd_pos + 1, injected.begin(), injected.end());
  }

  try {
    std::vector<const char*> cargs;
    cargs.push_back("psusy");
    for (const std::string& s : args) cargs.push_back(s.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_spectrum->parsed()) return cmd_spectrum(o);
    if (c_scan->parsed()) return cmd_scan(o);
    if (c_verify->parsed()) return cmd_verify(o);
    if (c_wave->parsed()) return cmd_wavefunction(o);
    if (c_reduce->parsed()) return cmd_reduce(o);
  } catch (const Error& e) {
    std::cerr << "psusy: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "psusy: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
