#pragma once

#include "psusy/core.hpp"

namespace psusy {

struct SpinorPair {
  SampledFunction u1;
  SampledFunction u2;
};

/// Phi = u1 + i u2, chi = u1 - i u2.
struct CombinedPair {
  SampledFunction phi;
  SampledFunction chi;
};

CombinedPair combine_spinors(const SpinorPair& s);
SpinorPair split_spinors(const CombinedPair& c);

/// Effective complex potential of the reduced second-order equation
///   -Phi'' + U Phi = 0,   U = 2*eps*nu - nu^2 - i*nu' - eps^2 + M^2.
/// The sampled overload differentiates nu numerically; the analytic overload
/// takes the exact derivative.
SampledFunction effective_potential(const SampledFunction& nu, const PhysicalConfig& cfg);
SampledFunction effective_potential(const Grid& g, const std::function<cplx(double)>& nu,
                                    const std::function<cplx(double)>& nu_deriv,
                                    const PhysicalConfig& cfg);

struct ChiRecovery {
  SampledFunction chi;
  /// Residual of the first-order relation used to build chi; zero up to
  /// rounding by construction.
  double defining_residual;
  /// Residual of the second first-order relation. Vanishes (to O(h^2)) only
  /// when phi actually solves the reduced second-order equation.
  double closure_residual;
};

/// Solve the first of the coupled first-order equations algebraically for chi
/// given phi: chi = ((eps - nu) phi + i phi') / M. Requires M != 0.
ChiRecovery recover_chi(const SampledFunction& phi, const SampledFunction& nu,
                        const PhysicalConfig& cfg);

/// Max-norm residuals of the two coupled first-order spinor equations
///   u1' + (eps - nu) u2 + M u2   and   u2' - (eps - nu) u1 + M u1.
/// Like the recover_chi diagnostics, the norm runs over the interior: at the
/// outermost two nodes the one-sided and central stencil errors mix at O(h).
std::pair<double, double> dirac_residual(const SpinorPair& s, const SampledFunction& nu,
                                         const PhysicalConfig& cfg);

}  // namespace psusy
