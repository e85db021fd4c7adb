#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psusy {

using cplx = std::complex<double>;

enum class ErrorKind {
  InvalidGrid,
  GridMismatch,
  InvalidArgument,
  NonFiniteValues,
  MasslessCase,
  NonNormalizableState,
  DegenerateRoot,
  DegenerateParameter,
  DegenerateLevel,
  WrongSolver,
  QrNonconvergence,
  SizeCap,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Uniform 1D grid; node i sits at x_min + i*h, no ghost nodes.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 2;
  double h = 1.0;

  static Grid uniform(double x_min, double x_max, int n_points);

  double node(int i) const { return x_min + i * h; }

  bool operator==(const Grid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// Complex-valued function tabulated on a grid. Values are checked to be
/// finite at construction.
struct SampledFunction {
  Grid grid;
  std::vector<cplx> values;

  static SampledFunction tabulate(const Grid& g, const std::function<cplx(double)>& f);
  static SampledFunction from_values(const Grid& g, std::vector<cplx> v);

  int size() const { return grid.n_points; }
};

/// Constant-mass configuration of the reduced two-component problem
/// (hbar = c = 1, mu = 1/M).
struct PhysicalConfig {
  double M = 1.0;
  double epsilon = 0.0;

  double mu() const { return 1.0 / M; }

  static PhysicalConfig make(double M, double epsilon);
};

/// Generalized Woods-Saxon parameter set.
struct DwsParams {
  double V0 = 0.0;  // well depth
  double a = 1.0;   // surface diffuseness
  double q = 1.0;   // deformation
  double X0 = 1.0;  // center, conventionally 1.25 * A0^(1/3)
  double c = 0.0;   // coupling of the squared term
  double A0 = 0.0;  // mass number, bookkeeping only

  double alpha() const { return 1.0 / a; }

  static DwsParams make(double V0, double a, double q, double X0, double c, double A0);
  static double default_radius(double A0) { return 1.25 * std::cbrt(A0); }
};

/// Second-order finite differences: central in the interior, one-sided at the
/// two endpoints. Requires at least 3 nodes.
SampledFunction derivative(const SampledFunction& f);

/// Trapezoidal quadrature over the whole grid.
cplx integrate(const SampledFunction& f);

/// Running trapezoid from x_min; the value at the first node is 0.
SampledFunction cumulative_integral(const SampledFunction& f);

double max_abs(const SampledFunction& f);

/// sqrt of the trapezoid integral of |f|^2.
double l2_norm(const SampledFunction& f);

/// Trapezoid inner product, conjugate-linear in the first argument.
cplx inner_product(const SampledFunction& a, const SampledFunction& b);

}  // namespace psusy
