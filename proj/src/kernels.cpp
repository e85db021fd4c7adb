#include "psusy/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace psusy::kernels {

namespace {

double pivot_floor(double off) {
  // Keeps e^2 / pivot finite when a pivot lands on zero.
  return std::max(off * off, 1.0) * 1e-292;
}

}  // namespace

int sturm_count_below(std::span<const double> diag, double off, double lambda) {
  const double e2 = off * off;
  const double piv = pivot_floor(off);
  int cnt = 0;
  double q = 1.0;
  for (size_t i = 0; i < diag.size(); ++i) {
    q = diag[i] - lambda - (i ? e2 / q : 0.0);
    if (std::abs(q) < piv) q = -piv;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

std::pair<double, double> gershgorin_bounds(std::span<const double> diag, double off) {
  double lo = diag[0], hi = diag[0];
  for (double d : diag) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double r = 2.0 * std::abs(off);
  return {lo - r, hi + r};
}

double bisect_kth(std::span<const double> diag, double off, int k, double lo, double hi) {
  for (int it = 0; it < 220; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count_below(diag, off, mid) <= k)
      lo = mid;
    else
      hi = mid;
    const double tol =
        4.0 * 2.220446049250313e-16 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (hi - lo <= tol) break;
  }
  return 0.5 * (lo + hi);
}

namespace serial {

std::vector<double> lowest_eigenvalues(std::span<const double> diag, double off, int k) {
  auto [glo, ghi] = gershgorin_bounds(diag, off);
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) out[j] = bisect_kth(diag, off, j, glo, ghi);
  return out;
}

void tabulate(const Grid& g, const std::function<cplx(double)>& f, std::span<cplx> out) {
  for (int i = 0; i < g.n_points; ++i) out[i] = f(g.node(i));
}

}  // namespace serial

namespace par {

std::vector<double> lowest_eigenvalues(std::span<const double> diag, double off, int k) {
  auto [glo, ghi] = gershgorin_bounds(diag, off);
  std::vector<double> out(k);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < k; ++j) out[j] = bisect_kth(diag, off, j, glo, ghi);
  return out;
}

void tabulate(const Grid& g, const std::function<cplx(double)>& f, std::span<cplx> out) {
  const int n = g.n_points;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = f(g.node(i));
}

}  // namespace par

}  // namespace psusy::kernels
