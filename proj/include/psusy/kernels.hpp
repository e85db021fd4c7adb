#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "psusy/core.hpp"

namespace psusy::kernels {

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, constant
/// off-diagonal) lying below lambda, via the Sturm pivot recurrence.
int sturm_count_below(std::span<const double> diag, double off, double lambda);

std::pair<double, double> gershgorin_bounds(std::span<const double> diag, double off);

/// Bisection for the k-th (0-based, ascending) eigenvalue inside [lo, hi].
double bisect_kth(std::span<const double> diag, double off, int k, double lo, double hi);

// Serial reference implementations, kept as the ground truth the OpenMP
// kernels are checked against.
namespace serial {
std::vector<double> lowest_eigenvalues(std::span<const double> diag, double off, int k);
void tabulate(const Grid& g, const std::function<cplx(double)>& f, std::span<cplx> out);
}  // namespace serial

// OpenMP kernels. Element arithmetic is identical to the serial reference,
// so results are bitwise equal at any thread count.
namespace par {
std::vector<double> lowest_eigenvalues(std::span<const double> diag, double off, int k);
void tabulate(const Grid& g, const std::function<cplx(double)>& f, std::span<cplx> out);
}  // namespace par

}  // namespace psusy::kernels
