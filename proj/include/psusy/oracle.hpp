#pragma once

#include <optional>
#include <string>

#include "psusy/core.hpp"

namespace psusy {

/// Dirichlet discretization of -mu^2 d^2/dx^2 + V(x) on the interior nodes.
/// Complex-symmetric: sub- and super-diagonal are the same real scalar.
struct TridiagonalHamiltonian {
  Grid grid;
  std::vector<cplx> diagonal;  // 2 mu^2/h^2 + V(x_i), interior nodes only
  double off_diagonal = 0.0;   // -mu^2/h^2
  bool hermitian = true;       // all Im V at 1e-14 level or below

  int size() const { return static_cast<int>(diagonal.size()); }
};

TridiagonalHamiltonian discretize(const SampledFunction& v, double mu);

enum class SpectrumMethod { ClosedForm, OracleReal, OracleComplex };

struct SpectrumResult {
  std::vector<cplx> eigenvalues;  // sorted by (Re, Im)
  SpectrumMethod method = SpectrumMethod::OracleReal;
  int n_points = 0;
  double h = 0.0;
  std::vector<double> convergence_estimate;  // per eigenvalue, when known
  std::vector<cplx> richardson;              // extrapolated values, when known
  std::vector<bool> numerically_real;        // complex solver only
  bool converged = true;
  std::vector<double> change_history;  // refine_until: max raw change per doubling
  int doublings_used = 0;
  std::vector<std::string> warnings;
};

/// Lowest k eigenvalues of a Hermitian discretization by Sturm bisection.
/// Deterministic and bit-reproducible for a fixed grid.
SpectrumResult eigen_real(const TridiagonalHamiltonian& h, int k);

/// All eigenvalues of the complex-symmetric tridiagonal matrix via dense
/// Hessenberg QR iteration with shifts (a tridiagonal matrix is already
/// Hessenberg). Size is capped; PSUSY_MAX_QR_SIZE overrides the cap.
SpectrumResult eigen_complex(const TridiagonalHamiltonian& h);

int complex_qr_size_cap();

/// Eigenvalues of a dense upper-Hessenberg complex matrix (row-major),
/// sorted by (Re, Im). The engine behind eigen_complex.
std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> a, int n);

/// Inverse iteration at the given (converged) eigenvalue; returns the
/// eigenvector embedded on the full grid with Dirichlet endpoints, normalized
/// to unit trapezoid norm.
SampledFunction eigenvector(const TridiagonalHamiltonian& h, cplx eigenvalue);

struct BoundStates {
  SpectrumResult spectrum;
  std::vector<SampledFunction> eigenfunctions;
};

/// Eigenpairs below the potential's right-edge plateau (estimated from the
/// last 5% of nodes), decaying at both boundaries. A boundary-contaminated
/// state attaches a domain-too-small warning instead of failing.
BoundStates bound_states(const std::function<cplx(double)>& v, const Grid& domain_hint,
                         double mu, int count);

struct RefineProblem {
  std::function<cplx(double)> potential;
  double x_min = 0.0;
  double x_max = 1.0;
  int n0 = 0;  // starting node count
  double mu = 1.0;
  int k = 1;  // number of eigenvalues tracked
  bool complex_solver = false;
};

/// Doubles the node count until the tracked eigenvalues stop moving (the stop
/// test runs on the Richardson-extrapolated sequence once two refinements
/// exist, since that is the quantity converging at O(h^4)); reports raw values
/// with the extrapolated ones alongside. Budget exhaustion flags the result
/// unconverged and still returns it.
SpectrumResult refine_until(const RefineProblem& p, double target_tol, int max_doublings);

}  // namespace psusy
