#pragma once

#include "psusy/core.hpp"
#include "psusy/susy.hpp"

namespace psusy {

enum class Branch { Plus, Minus };

/// Overflow-safe evaluation of the generalized Woods-Saxon potential
///   V(x) = -V0 w + c w^2,   w = 1 / (q + exp((x - X0)/a)).
std::function<double(double)> dws_potential(const DwsParams& p);

struct DwsSuperpotentialParams {
  cplx G1{};
  cplx G2{};
  double alpha = 1.0;  // = 1/a
  double q = 1.0;
  double X0 = 0.0;
  double mu = 1.0;
  Branch branch = Branch::Minus;
};

struct MatchingSolution {
  cplx G1{};
  cplx G2{};
  cplx E0{};
  double residual = 0.0;  // max residual of the three matching conditions
};

/// Residuals of the three matching conditions for the superpotential ansatz
/// F = -mu (G1 + G2 w):
///   mu^2 G1^2 + E0,   mu^2 (2 G1 G2 - i alpha G2) + V0,   mu^2 (G2^2 + i alpha q G2) - c.
double matching_residual(const DwsParams& p, double mu, cplx g1, cplx g2, cplx e0);

/// Solves the matching conditions. G2 is a root of the quadratic
/// G2^2 + i alpha q G2 = c/mu^2, i.e. G2 = -i alpha q / 2 +- sqrt(c/mu^2 - (alpha q/2)^2),
/// with the branch picking the sign of the principal square root. The commonly
/// quoted form with +(alpha q/2)^2 under the radical fails back-substitution;
/// the roots used here leave residuals at rounding level.
MatchingSolution solve_matching(const DwsParams& p, double mu, Branch branch);

/// Matched parameter set; construction enforces residual <= 1e-12.
DwsSuperpotentialParams make_superpotential_params(const DwsParams& p, double mu,
                                                   Branch branch);

/// Parameter set with an explicitly forced G2 (G1 from the linear matching
/// relation). The matching residual is NOT enforced; use matching_residual to
/// report it.
DwsSuperpotentialParams superpotential_params_with_g2(const DwsParams& p, double mu,
                                                      cplx g2);

/// F(x) = -mu (G1 + G2 w(x)) with exact derivative F'(x) = mu alpha G2 s w
/// where s = 1/(1 + q exp(-alpha (x - X0))).
Superpotential dws_superpotential(const DwsSuperpotentialParams& sp);

/// Closed-form ground state exp(G1 x) * s^(G2/(alpha q)), normalized. This is
/// the antiderivative-consistent form; it matches the quadrature route of
/// ground_state_from_superpotential up to one overall constant.
SampledFunction dws_ground_state(const DwsSuperpotentialParams& sp, const Grid& g);

/// a2 = a1 - alpha q.
cplx parameter_map(cplx g2, double alpha, double q);

/// Two-term shape-invariance residual
///   R = mu^2 [kappa/(2 mu^2 a1) - a1/(2q)]^2 - mu^2 [kappa/(2 mu^2 a2) - a2/(2q)]^2,
/// kappa = -V0 + c/q. Throws DegenerateParameter on a zero parameter.
cplx residual_R(cplx a1, cplx a2, const DwsParams& p, double mu);

/// Closed-form level energy -mu^2 [kappa/(2 mu^2 (G2 - n alpha q)) - (G2 - n alpha q)/(2q)]^2.
cplx energy_closed_form(int n, const DwsParams& p, double mu, Branch branch);
cplx energy_closed_form_from_g2(int n, cplx g2, const DwsParams& p, double mu);

/// The special-case spectrum formula behind the parameter-sweep figures,
/// evaluated verbatim:
///   E_n = -(mu^2/a^2) [ (a^2 V0 / (mu^2 q (n+1)))^2 + ((n+1)/2)^2 + 2 a V0^2/(mu^2 q^2) ].
double energy_special_case(int n, const DwsParams& p, double mu);

/// Default evaluation window [max(0, X0 - 10a), X0 + 25a].
Grid default_window(const DwsParams& p, int n_points);

}  // namespace psusy
