#include "psusy/core.hpp"

#include <cmath>

#include "psusy/kernels.hpp"

namespace psusy {

Grid Grid::uniform(double x_min, double x_max, int n_points) {
  if (n_points < 3)
    throw Error(ErrorKind::InvalidGrid, "grid needs at least 3 nodes, got " +
                                            std::to_string(n_points));
  if (!(x_max > x_min))
    throw Error(ErrorKind::InvalidGrid, "grid needs x_max > x_min");
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw Error(ErrorKind::InvalidGrid, "grid endpoints must be finite");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_points = n_points;
  g.h = (x_max - x_min) / (n_points - 1);
  return g;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b))
    throw Error(ErrorKind::GridMismatch, std::string(where) + ": operands live on different grids");
}

SampledFunction SampledFunction::tabulate(const Grid& g, const std::function<cplx(double)>& f) {
  if (g.n_points < 3) throw Error(ErrorKind::InvalidGrid, "tabulate: invalid grid");
  std::vector<cplx> v(g.n_points);
  kernels::par::tabulate(g, f, v);
  return from_values(g, std::move(v));
}

SampledFunction SampledFunction::from_values(const Grid& g, std::vector<cplx> v) {
  if (g.n_points < 3) throw Error(ErrorKind::InvalidGrid, "from_values: invalid grid");
  if (static_cast<int>(v.size()) != g.n_points)
    throw Error(ErrorKind::InvalidArgument, "from_values: value count does not match grid");
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::NonFiniteValues, "sampled function holds a non-finite value");
  SampledFunction f;
  f.grid = g;
  f.values = std::move(v);
  return f;
}

PhysicalConfig PhysicalConfig::make(double M, double epsilon) {
  if (M == 0.0)
    throw Error(ErrorKind::MasslessCase, "massless case M = 0 is not supported");
  if (!(M > 0.0))
    throw Error(ErrorKind::InvalidArgument, "mass must be positive");
  PhysicalConfig c;
  c.M = M;
  c.epsilon = epsilon;
  return c;
}

DwsParams DwsParams::make(double V0, double a, double q, double X0, double c, double A0) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "diffuseness a must be positive");
  if (!(q > 0.0)) throw Error(ErrorKind::InvalidArgument, "deformation q must be positive");
  if (!(X0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius X0 must be positive");
  DwsParams p;
  p.V0 = V0;
  p.a = a;
  p.q = q;
  p.X0 = X0;
  p.c = c;
  p.A0 = A0;
  return p;
}

SampledFunction derivative(const SampledFunction& f) {
  const int n = f.size();
  if (n < 3) throw Error(ErrorKind::InvalidGrid, "derivative: grid has fewer than 3 nodes");
  const double h = f.grid.h;
  const auto& v = f.values;
  std::vector<cplx> d(n);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return SampledFunction::from_values(f.grid, std::move(d));
}

cplx integrate(const SampledFunction& f) {
  const int n = f.size();
  const auto& v = f.values;
  cplx acc = 0.5 * (v[0] + v[n - 1]);
  for (int i = 1; i < n - 1; ++i) acc += v[i];
  return acc * f.grid.h;
}

SampledFunction cumulative_integral(const SampledFunction& f) {
  const int n = f.size();
  const auto& v = f.values;
  const double h = f.grid.h;
  std::vector<cplx> c(n);
  c[0] = 0.0;
  for (int i = 1; i < n; ++i) c[i] = c[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
  return SampledFunction::from_values(f.grid, std::move(c));
}

double max_abs(const SampledFunction& f) {
  double m = 0.0;
  for (const cplx& z : f.values) m = std::max(m, std::abs(z));
  return m;
}

double l2_norm(const SampledFunction& f) {
  const int n = f.size();
  const auto& v = f.values;
  double acc = 0.5 * (std::norm(v[0]) + std::norm(v[n - 1]));
  for (int i = 1; i < n - 1; ++i) acc += std::norm(v[i]);
  return std::sqrt(acc * f.grid.h);
}

cplx inner_product(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a.grid, b.grid, "inner_product");
  const int n = a.size();
  cplx acc = 0.5 * (std::conj(a.values[0]) * b.values[0] +
                    std::conj(a.values[n - 1]) * b.values[n - 1]);
  for (int i = 1; i < n - 1; ++i) acc += std::conj(a.values[i]) * b.values[i];
  return acc * a.grid.h;
}

}  // namespace psusy
