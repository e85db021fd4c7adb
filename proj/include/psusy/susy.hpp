#pragma once

#include <span>

#include "psusy/core.hpp"

namespace psusy {

// The first-order factorization operators and the partner potentials can be
// written with several sign/phase rules that appear interchangeably in the
// literature of complexified superpotentials. They are NOT equivalent once F
// is complex, so the rule is data here and factorization_audit measures which
// one actually composes to -mu^2 d^2/dx^2 + V.
//
//   Complexified:  lowering mu*d/dx + i F,  raising -i*mu*d/dx + F,
//                  partners V_{-,+} = F^2 -+ i*mu*F' + alpha0
//   Standard:      lowering mu*d/dx + F,    raising -mu*d/dx + F,
//                  partners V_{-,+} = F^2 -+ mu*F' + alpha0
//   Transpose:     same sign rules as Standard; the raising operator is
//                  declared as the formal transpose under the bilinear
//                  (non-conjugating) pairing, the natural choice for complex F.
enum class Convention { Complexified, Standard, Transpose };

const char* convention_name(Convention c);

/// Analytic superpotential. eval_deriv must agree with the numeric derivative
/// of eval to O(h^2); the constructor checks this on the given grid.
struct Superpotential {
  std::function<cplx(double)> eval;
  std::function<cplx(double)> eval_deriv;
  cplx param{};  // family parameter this member was built at, when applicable

  Superpotential(std::function<cplx(double)> f, std::function<cplx(double)> df,
                 const Grid& check_grid, cplx param = {});
  static Superpotential unchecked(std::function<cplx(double)> f,
                                  std::function<cplx(double)> df, cplx param = {});

 private:
  Superpotential() = default;
};

struct PartnerPair {
  SampledFunction v_minus;
  SampledFunction v_plus;
};

PartnerPair partner_potentials(const Superpotential& f, double mu, Convention conv,
                               cplx alpha0, const Grid& g);

/// Max-norm of V - [F^2 minus the convention's derivative term] - E0 over the
/// grid of V (the lowering-side form of the nonlinear first-order relation).
double riccati_residual(const Superpotential& f, const SampledFunction& v, cplx e0,
                        double mu, Convention conv);

/// Kernel of the convention's lowering operator, normalized to unit trapezoid
/// norm: exp(-(1/mu) int F) for Standard/Transpose, exp(-(i/mu) int F) for
/// Complexified. Throws NonNormalizableState when the state blows up toward a
/// boundary of the grid; a left boundary at exactly x = 0 counts as the
/// half-line wall, where a peaked state is legitimate.
SampledFunction ground_state_from_superpotential(const Superpotential& f, double mu,
                                                 const Grid& g,
                                                 Convention conv = Convention::Standard);

SampledFunction apply_lowering(const Superpotential& f, double mu,
                               const SampledFunction& psi,
                               Convention conv = Convention::Standard);
SampledFunction apply_raising(const Superpotential& f, double mu,
                              const SampledFunction& psi,
                              Convention conv = Convention::Standard);

struct FactorizationReport {
  struct Entry {
    Convention convention;
    double residual;
  };
  std::vector<Entry> by_residual;  // sorted ascending
  Convention best() const { return by_residual.front().convention; }
};

/// For each convention, max over test functions of
///   || (raise(lower(psi)) + E0 psi) - (-mu^2 psi'' + V psi) ||_inf,
/// with psi'' taken by applying the numeric derivative twice. Reports which
/// rule (if any) realizes the claimed factorization of V.
FactorizationReport factorization_audit(const Superpotential& f, double mu,
                                        const SampledFunction& v, cplx e0,
                                        std::span<const SampledFunction> test_functions);

struct SuperchargeReport {
  double q_squared_max;        // max over tests of ||Q^2 psi||, structurally zero
  double q_dag_squared_max;    // likewise for the adjoint charge
  double anticommutator_residual;  // {Q,Q+} vs block-diag composition
};

/// Builds the nilpotent 2x2 block charges from the first-order operators and
/// checks the closure of their algebra on the given test functions.
SuperchargeReport supercharge_algebra_check(const Superpotential& f, double mu,
                                            const Grid& g,
                                            std::span<const SampledFunction> test_functions,
                                            Convention conv = Convention::Standard);

struct ShapeInvarianceResult {
  cplx R;            // grid mean of V_plus(x, a1) - V_minus(x, a2)
  double x_variance;  // max deviation of that difference from its mean
};

/// Shape invariance holds for (a1, a2) iff x_variance is at tolerance level:
/// the partner difference is then the x-independent residual R.
ShapeInvarianceResult shape_invariance_residual(
    const std::function<Superpotential(cplx)>& family, cplx a1, cplx a2, double mu,
    Convention conv, const Grid& g);

struct HierarchyLevel {
  int k = 1;               // 1-based level index
  cplx param{};            // a_k
  cplx residual{};         // R carried from level k-1 to k; zero at level 1
  cplx cumulative_energy{};  // sum of residuals up to level k
};

/// Iterates a_{k+1} = param_map(a_k) and accumulates the shape-invariance
/// energy ladder. Level 1 carries the empty sum, i.e. energy zero.
std::vector<HierarchyLevel> hierarchy_energies(
    cplx a1, const std::function<cplx(cplx)>& param_map,
    const std::function<cplx(cplx, cplx)>& residual_fn, int n_levels);

struct PotentialParts {
  SampledFunction z;  // imaginary-part generator Z = -mu F'
  /// Residual of the derivative identity Z' = -mu F'' (two independent
  /// finite-difference routes); O(h^2) for smooth F.
  double derivative_identity_residual;
  /// Residual of the coupling relation 2 mu^3 (eps - nu) nu' = 2 Z F,
  /// reported as a diagnostic only.
  double coupling_residual;
};

PotentialParts decompose_potential_parts(const Superpotential& f, const SampledFunction& nu,
                                         const PhysicalConfig& cfg);

/// Smooth boundary-decaying bump functions for operator audits.
std::vector<SampledFunction> default_test_functions(const Grid& g);

}  // namespace psusy
