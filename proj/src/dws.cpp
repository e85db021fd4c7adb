#include "psusy/dws.hpp"

#include <cmath>
#include <limits>

namespace psusy {

namespace {

const cplx kI(0.0, 1.0);

// w = 1/(q + e^{(x-X0)/a}) and the logistic s = 1/(1 + q e^{-(x-X0)/a});
// both stay finite for |x - X0|/a well past 700.
double dws_w(double x, double X0, double alpha, double q) {
  return 1.0 / (q + std::exp(alpha * (x - X0)));
}

double dws_s(double x, double X0, double alpha, double q) {
  return 1.0 / (1.0 + q * std::exp(-alpha * (x - X0)));
}

cplx g1_from_g2(const DwsParams& p, double mu, cplx g2) {
  const double kappa = -p.V0 + p.c / p.q;
  return kappa / (2.0 * g2 * mu * mu) - g2 / (2.0 * p.q);
}

}  // namespace

std::function<double(double)> dws_potential(const DwsParams& p) {
  const double V0 = p.V0, c = p.c, q = p.q, X0 = p.X0, alpha = p.alpha();
  return [V0, c, q, X0, alpha](double x) {
    const double w = dws_w(x, X0, alpha, q);
    return -V0 * w + c * w * w;
  };
}

double matching_residual(const DwsParams& p, double mu, cplx g1, cplx g2, cplx e0) {
  const double mu2 = mu * mu;
  const double alpha = p.alpha();
  const double r1 = std::abs(mu2 * g1 * g1 + e0);
  const double r2 = std::abs(mu2 * (2.0 * g1 * g2 - kI * alpha * g2) + p.V0);
  const double r3 = std::abs(mu2 * (g2 * g2 + kI * alpha * p.q * g2) - p.c);
  return std::max({r1, r2, r3});
}

MatchingSolution solve_matching(const DwsParams& p, double mu, Branch branch) {
  const double alpha = p.alpha();
  const double half = 0.5 * alpha * p.q;
  const cplx root = std::sqrt(cplx(p.c / (mu * mu) - half * half, 0.0));
  const cplx g2 = -kI * half + (branch == Branch::Plus ? root : -root);
  if (std::abs(g2) == 0.0)
    throw Error(ErrorKind::DegenerateRoot,
                "matching root G2 = 0 on this branch (G1 undefined); use the other branch");
  const cplx g1 = g1_from_g2(p, mu, g2);
  const cplx e0 = -mu * mu * g1 * g1;
  MatchingSolution s;
  s.G1 = g1;
  s.G2 = g2;
  s.E0 = e0;
  s.residual = matching_residual(p, mu, g1, g2, e0);
  return s;
}

DwsSuperpotentialParams make_superpotential_params(const DwsParams& p, double mu,
                                                   Branch branch) {
  MatchingSolution s = solve_matching(p, mu, branch);
  if (s.residual > 1e-12)
    throw Error(ErrorKind::InvalidArgument,
                "matching conditions not satisfied to 1e-12 (residual " +
                    std::to_string(s.residual) + ")");
  DwsSuperpotentialParams sp;
  sp.G1 = s.G1;
  sp.G2 = s.G2;
  sp.alpha = p.alpha();
  sp.q = p.q;
  sp.X0 = p.X0;
  sp.mu = mu;
  sp.branch = branch;
  return sp;
}

DwsSuperpotentialParams superpotential_params_with_g2(const DwsParams& p, double mu,
                                                      cplx g2) {
  if (std::abs(g2) == 0.0)
    throw Error(ErrorKind::DegenerateRoot, "forced G2 = 0 leaves G1 undefined");
  DwsSuperpotentialParams sp;
  sp.G1 = g1_from_g2(p, mu, g2);
  sp.G2 = g2;
  sp.alpha = p.alpha();
  sp.q = p.q;
  sp.X0 = p.X0;
  sp.mu = mu;
  sp.branch = Branch::Minus;
  return sp;
}

Superpotential dws_superpotential(const DwsSuperpotentialParams& sp) {
  const cplx G1 = sp.G1, G2 = sp.G2;
  const double alpha = sp.alpha, q = sp.q, X0 = sp.X0, mu = sp.mu;
  auto f = [G1, G2, alpha, q, X0, mu](double x) {
    return -mu * (G1 + G2 * dws_w(x, X0, alpha, q));
  };
  auto df = [G2, alpha, q, X0, mu](double x) {
    return mu * alpha * G2 * dws_s(x, X0, alpha, q) * dws_w(x, X0, alpha, q);
  };
  Grid check = Grid::uniform(std::max(0.0, X0 - 8.0 / alpha), X0 + 12.0 / alpha, 3001);
  return Superpotential(f, df, check, G2);
}

SampledFunction dws_ground_state(const DwsSuperpotentialParams& sp, const Grid& g) {
  const cplx expo = sp.G2 / (sp.alpha * sp.q);
  std::vector<cplx> v(g.n_points);
  bool overflow_right = false, overflow_left = false;
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.node(i);
    // log of the logistic factor, safe on both tails
    const double u = -sp.alpha * (x - sp.X0);
    double log_s;
    if (u > 500.0)
      log_s = -(u + std::log(sp.q));
    else
      log_s = -std::log1p(sp.q * std::exp(u));
    const cplx log_val = sp.G1 * x + expo * log_s;
    if (log_val.real() > 700.0) {
      (x > sp.X0 ? overflow_right : overflow_left) = true;
      v[i] = cplx(std::numeric_limits<double>::infinity(), 0.0);
    } else {
      v[i] = std::exp(log_val);
    }
  }
  if (overflow_right || overflow_left)
    throw Error(ErrorKind::NonNormalizableState,
                std::string("closed-form ground state grows toward ") +
                    (overflow_right ? "+x" : "-x") + " and is not normalizable on this grid");

  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::NonNormalizableState,
                  "closed-form ground state overflowed on this grid");

  // normalize; reuse the growth detection of the quadrature route by hand
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z));
  const int n = g.n_points;
  auto edge_dominates = [&](int edge, int step) {
    if (std::abs(v[edge]) < 0.999 * m) return false;
    double mid = 0.0;
    for (int i = n / 4; i < 3 * n / 4; ++i) mid = std::max(mid, std::abs(v[i]));
    if (mid > 0.0 && std::abs(v[edge]) / mid < 1e3) return false;
    for (int j = 0; j < std::max(3, n / 20) - 1; ++j) {
      const int i = edge - j * step;
      if (!(std::abs(v[i]) > std::abs(v[i - step]) * (1.0 + 1e-9))) return false;
    }
    return true;
  };
  if (edge_dominates(n - 1, 1))
    throw Error(ErrorKind::NonNormalizableState,
                "closed-form ground state grows toward +x and is not normalizable on this grid");
  // a left boundary at x = 0 is the half-line wall; a state peaked there is
  // wall-hugging, not outward-growing
  if (g.x_min != 0.0 && edge_dominates(0, -1))
    throw Error(ErrorKind::NonNormalizableState,
                "closed-form ground state grows toward -x and is not normalizable on this grid");

  double acc = 0.5 * (std::norm(v[0]) + std::norm(v[n - 1]));
  for (int i = 1; i < n - 1; ++i) acc += std::norm(v[i]);
  const double nrm = std::sqrt(acc * g.h);
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw Error(ErrorKind::NonNormalizableState, "closed-form ground state has divergent norm");
  for (cplx& z : v) z /= nrm;
  return SampledFunction::from_values(g, std::move(v));
}

cplx parameter_map(cplx g2, double alpha, double q) { return g2 - alpha * q; }

namespace {

cplx bracket_term(cplx a, const DwsParams& p, double mu) {
  const double kappa = -p.V0 + p.c / p.q;
  const cplx b = kappa / (2.0 * mu * mu * a) - a / (2.0 * p.q);
  return mu * mu * b * b;
}

}  // namespace

cplx residual_R(cplx a1, cplx a2, const DwsParams& p, double mu) {
  if (std::abs(a1) == 0.0 || std::abs(a2) == 0.0)
    throw Error(ErrorKind::DegenerateParameter, "shape-invariance residual hit a zero parameter");
  return bracket_term(a1, p, mu) - bracket_term(a2, p, mu);
}

cplx energy_closed_form_from_g2(int n, cplx g2, const DwsParams& p, double mu) {
  const cplx an = g2 - static_cast<double>(n) * p.alpha() * p.q;
  if (std::abs(an) == 0.0)
    throw Error(ErrorKind::DegenerateLevel,
                "closed-form level " + std::to_string(n) + " is degenerate (G2 - n alpha q = 0)");
  return -bracket_term(an, p, mu);
}

cplx energy_closed_form(int n, const DwsParams& p, double mu, Branch branch) {
  return energy_closed_form_from_g2(n, solve_matching(p, mu, branch).G2, p, mu);
}

double energy_special_case(int n, const DwsParams& p, double mu) {
  const double m1 = n + 1.0;
  const double mu2 = mu * mu;
  const double t1 = std::pow(p.a * p.a * p.V0 / (mu2 * p.q * m1), 2);
  const double t2 = std::pow(m1 / 2.0, 2);
  const double t3 = 2.0 * p.a * p.V0 * p.V0 / (mu2 * p.q * p.q);
  return -(mu2 / (p.a * p.a)) * (t1 + t2 + t3);
}

Grid default_window(const DwsParams& p, int n_points) {
  return Grid::uniform(std::max(0.0, p.X0 - 10.0 * p.a), p.X0 + 25.0 * p.a, n_points);
}

}  // namespace psusy
