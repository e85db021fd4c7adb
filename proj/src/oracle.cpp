#include "psusy/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "psusy/kernels.hpp"

namespace psusy {

namespace {

constexpr double kEps = 2.220446049250313e-16;

bool lex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// ------------------------------------------------------------------
// complex Hessenberg QR (explicit single shift, unitary Givens rotations)
// ------------------------------------------------------------------

struct Rotation {
  double c;  // real cosine
  cplx s;
};

// G^H [f; g] = [r; 0] with G = [[c, s], [-conj(s), c]] unitary.
Rotation make_rotation(cplx f, cplx g) {
  const double af = std::abs(f), ag = std::abs(g);
  if (ag == 0.0) return {1.0, cplx(0.0, 0.0)};
  if (af == 0.0) return {0.0, -std::conj(g) / ag};
  const double rho = std::hypot(af, ag);
  return {af / rho, -(f / af) * (std::conj(g) / rho)};
}

// One explicit shifted QR step on the active block [l, h] of the dense
// Hessenberg matrix A (row-major, n columns).
void qr_step(std::vector<cplx>& A, int n, int l, int h, cplx shift) {
  for (int i = l; i <= h; ++i) A[i * n + i] -= shift;
  std::vector<Rotation> rots(h - l);
  for (int i = l; i < h; ++i) {
    const Rotation r = make_rotation(A[i * n + i], A[(i + 1) * n + i]);
    rots[i - l] = r;
    for (int j = i; j <= h; ++j) {
      const cplx x = A[i * n + j];
      const cplx y = A[(i + 1) * n + j];
      A[i * n + j] = r.c * x - r.s * y;
      A[(i + 1) * n + j] = std::conj(r.s) * x + r.c * y;
    }
    A[(i + 1) * n + i] = 0.0;
  }
  for (int i = l; i < h; ++i) {
    const Rotation r = rots[i - l];
    for (int k = l; k <= i + 1; ++k) {
      const cplx u = A[k * n + i];
      const cplx v = A[k * n + i + 1];
      A[k * n + i] = r.c * u - std::conj(r.s) * v;
      A[k * n + i + 1] = r.s * u + r.c * v;
    }
  }
  for (int i = l; i <= h; ++i) A[i * n + i] += shift;
}

// Eigenvalues of [[a, b], [c, d]], larger-|.| root first computed stably.
std::pair<cplx, cplx> eig2x2(cplx a, cplx b, cplx c, cplx d) {
  const cplx tr = a + d;
  const cplx det = a * d - b * c;
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx cand = (std::real(std::conj(tr) * disc) >= 0.0) ? tr + disc : tr - disc;
  const cplx l1 = 0.5 * cand;
  const cplx l2 = (std::abs(l1) > 0.0) ? det / l1 : 0.5 * (tr - disc);
  return {l1, l2};
}

cplx wilkinson_shift(const std::vector<cplx>& A, int n, int h) {
  const cplx a = A[(h - 1) * n + (h - 1)];
  const cplx b = A[(h - 1) * n + h];
  const cplx c = A[h * n + (h - 1)];
  const cplx d = A[h * n + h];
  auto [l1, l2] = eig2x2(a, b, c, d);
  return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

}  // namespace

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> A, int n) {
  std::vector<cplx> eig;
  eig.reserve(n);
  double anorm = 0.0;
  for (const cplx& z : A) anorm = std::max(anorm, std::abs(z));
  if (anorm == 0.0) anorm = 1.0;

  auto negligible = [&](int i) {
    double tol = kEps * (std::abs(A[(i - 1) * n + (i - 1)]) + std::abs(A[i * n + i]));
    if (tol == 0.0) tol = kEps * anorm;
    return std::abs(A[i * n + (i - 1)]) <= tol;
  };

  int h = n - 1;
  int iters = 0;
  while (h >= 0) {
    if (h == 0) {
      eig.push_back(A[0]);
      break;
    }
    if (negligible(h)) {
      A[h * n + (h - 1)] = 0.0;
      eig.push_back(A[h * n + h]);
      --h;
      iters = 0;
      continue;
    }
    int l = h;
    while (l > 0 && !negligible(l)) --l;
    if (l > 0) A[l * n + (l - 1)] = 0.0;
    if (l == h - 1) {
      auto [l1, l2] = eig2x2(A[l * n + l], A[l * n + h], A[h * n + l], A[h * n + h]);
      eig.push_back(l1);
      eig.push_back(l2);
      h = l - 1;
      iters = 0;
      continue;
    }
    if (++iters > 80)
      throw Error(ErrorKind::QrNonconvergence,
                  "QR iteration failed to deflate after " + std::to_string(iters) +
                      " sweeps on a block of size " + std::to_string(h - l + 1));
    cplx shift = wilkinson_shift(A, n, h);
    if (iters % 14 == 0)
      shift = A[h * n + h] + 0.75 * std::abs(A[h * n + (h - 1)]);  // exceptional
    qr_step(A, n, l, h, shift);
  }
  std::sort(eig.begin(), eig.end(), lex_less);
  return eig;
}

namespace {

// ------------------------------------------------------------------
// inverse iteration on the (shifted) tridiagonal, any scalar field
// ------------------------------------------------------------------

template <typename S>
S from_cplx(const cplx& z);
template <>
double from_cplx<double>(const cplx& z) {
  return z.real();
}
template <>
cplx from_cplx<cplx>(const cplx& z) {
  return z;
}

template <typename S>
void solve_shifted_tridiag(const std::vector<cplx>& diag, double off, S shift,
                           std::vector<S>& b) {
  const int m = static_cast<int>(diag.size());
  std::vector<S> d(m), du(std::max(m - 1, 0)), du2(std::max(m - 2, 0)),
      dl(std::max(m - 1, 0));
  for (int i = 0; i < m; ++i) d[i] = from_cplx<S>(diag[i]) - shift;
  for (int i = 0; i + 1 < m; ++i) du[i] = S(off);
  for (int i = 0; i + 1 < m; ++i) dl[i] = S(off);
  for (int i = 0; i + 2 < m; ++i) du2[i] = S(0);

  double scale = std::abs(off) + std::abs(shift);
  for (const cplx& z : diag) scale = std::max(scale, std::abs(z));
  const double tiny = std::max(scale, 1.0) * kEps * kEps;

  for (int i = 0; i + 1 < m; ++i) {
    if (std::abs(dl[i]) > std::abs(d[i])) {
      // pivot on the lower row
      std::swap(d[i], dl[i]);
      const S t_mid = d[i + 1];
      const S t_up = (i + 2 < m) ? du[i + 1] : S(0);
      d[i + 1] = du[i];
      du[i] = t_mid;
      if (i + 2 < m) {
        du2[i] = t_up;
        du[i + 1] = S(0);
      }
      std::swap(b[i], b[i + 1]);
    }
    if (std::abs(d[i]) < tiny) d[i] = S(tiny);
    const S fact = dl[i] / d[i];
    d[i + 1] -= fact * du[i];
    if (i + 2 < m) du[i + 1] -= fact * du2[i];
    b[i + 1] -= fact * b[i];
  }
  if (std::abs(d[m - 1]) < tiny) d[m - 1] = S(tiny);

  b[m - 1] /= d[m - 1];
  if (m >= 2) {
    if (std::abs(d[m - 2]) < tiny) d[m - 2] = S(tiny);
    b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
  }
  for (int i = m - 3; i >= 0; --i) {
    if (std::abs(d[i]) < tiny) d[i] = S(tiny);
    b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
}

// Fixed-seed xorshift start vector keeps runs bit-reproducible.
double next_unit(uint64_t& state) {
  state ^= state << 13;
  state ^= state >> 7;
  state ^= state << 17;
  return 2.0 * (static_cast<double>(state >> 11) * 0x1.0p-53) - 1.0;
}

template <typename S>
std::vector<S> inverse_iteration(const TridiagonalHamiltonian& ham, S shift) {
  const int m = ham.size();
  std::vector<S> v(m);
  uint64_t rng = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < m; ++i) v[i] = S(next_unit(rng));
  for (int it = 0; it < 3; ++it) {
    solve_shifted_tridiag(ham.diagonal, ham.off_diagonal, shift, v);
    double mx = 0.0;
    for (const S& z : v) mx = std::max(mx, std::abs(z));
    if (!(mx > 0.0) || !std::isfinite(mx)) {
      uint64_t r2 = 0x2545f4914f6cdd1dULL + it;
      for (int i = 0; i < m; ++i) v[i] = S(next_unit(r2));
      continue;
    }
    for (S& z : v) z /= mx;
  }
  return v;
}

SampledFunction embed_normalized(const TridiagonalHamiltonian& ham,
                                 const std::vector<cplx>& interior) {
  const Grid& g = ham.grid;
  std::vector<cplx> full(g.n_points, 0.0);
  for (int i = 0; i < ham.size(); ++i) full[i + 1] = interior[i];
  double acc = 0.0;
  for (const cplx& z : full) acc += std::norm(z);
  acc -= 0.5 * (std::norm(full[0]) + std::norm(full.back()));
  const double nrm = std::sqrt(acc * g.h);
  for (cplx& z : full) z /= nrm;
  return SampledFunction::from_values(g, std::move(full));
}

std::vector<double> real_diagonal(const TridiagonalHamiltonian& h) {
  std::vector<double> d(h.size());
  for (int i = 0; i < h.size(); ++i) d[i] = h.diagonal[i].real();
  return d;
}

}  // namespace

TridiagonalHamiltonian discretize(const SampledFunction& v, double mu) {
  if (v.size() < 5)
    throw Error(ErrorKind::InvalidGrid, "discretize needs at least 5 nodes");
  const double h = v.grid.h;
  const double kin = mu * mu / (h * h);
  TridiagonalHamiltonian t;
  t.grid = v.grid;
  t.off_diagonal = -kin;
  t.diagonal.resize(v.size() - 2);
  t.hermitian = true;
  for (int i = 0; i < v.size() - 2; ++i) {
    t.diagonal[i] = 2.0 * kin + v.values[i + 1];
    if (std::abs(v.values[i + 1].imag()) > 1e-14) t.hermitian = false;
  }
  return t;
}

SpectrumResult eigen_real(const TridiagonalHamiltonian& h, int k) {
  if (!h.hermitian)
    throw Error(ErrorKind::WrongSolver,
                "eigen_real requires a Hermitian discretization; use eigen_complex");
  if (k < 1 || k > h.size())
    throw Error(ErrorKind::InvalidArgument, "eigen_real: k out of range");
  std::vector<double> diag = real_diagonal(h);
  std::vector<double> vals = kernels::par::lowest_eigenvalues(diag, h.off_diagonal, k);
  SpectrumResult r;
  r.method = SpectrumMethod::OracleReal;
  r.n_points = h.grid.n_points;
  r.h = h.grid.h;
  r.eigenvalues.assign(vals.begin(), vals.end());
  return r;
}

int complex_qr_size_cap() {
  if (const char* env = std::getenv("PSUSY_MAX_QR_SIZE")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  return 1200;
}

SpectrumResult eigen_complex(const TridiagonalHamiltonian& h) {
  const int m = h.size();
  const int cap = complex_qr_size_cap();
  if (m > cap)
    throw Error(ErrorKind::SizeCap,
                "complex QR limited to " + std::to_string(cap) +
                    " interior nodes (PSUSY_MAX_QR_SIZE overrides); got " + std::to_string(m));
  std::vector<cplx> dense(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    dense[static_cast<size_t>(i) * m + i] = h.diagonal[i];
    if (i + 1 < m) {
      dense[static_cast<size_t>(i) * m + i + 1] = h.off_diagonal;
      dense[static_cast<size_t>(i + 1) * m + i] = h.off_diagonal;
    }
  }
  SpectrumResult r;
  r.method = SpectrumMethod::OracleComplex;
  r.n_points = h.grid.n_points;
  r.h = h.grid.h;
  r.eigenvalues = hessenberg_eigenvalues(std::move(dense), m);
  r.numerically_real.resize(r.eigenvalues.size());
  for (size_t i = 0; i < r.eigenvalues.size(); ++i)
    r.numerically_real[i] =
        std::abs(r.eigenvalues[i].imag()) <= 1e-8 * (1.0 + std::abs(r.eigenvalues[i].real()));
  return r;
}

SampledFunction eigenvector(const TridiagonalHamiltonian& h, cplx eigenvalue) {
  if (h.hermitian && eigenvalue.imag() == 0.0) {
    std::vector<double> v = inverse_iteration<double>(h, eigenvalue.real());
    std::vector<cplx> vi(v.begin(), v.end());
    return embed_normalized(h, vi);
  }
  std::vector<cplx> v = inverse_iteration<cplx>(h, eigenvalue);
  return embed_normalized(h, v);
}

BoundStates bound_states(const std::function<cplx(double)>& v, const Grid& domain_hint,
                         double mu, int count) {
  SampledFunction vs = SampledFunction::tabulate(domain_hint, v);
  TridiagonalHamiltonian ham = discretize(vs, mu);

  // plateau estimate from the last 5% of nodes
  const int n = vs.size();
  const int tail = std::max(2, n / 20);
  cplx plateau = 0.0;
  for (int i = n - tail; i < n; ++i) plateau += vs.values[i];
  plateau /= static_cast<double>(tail);

  BoundStates out;
  out.spectrum.n_points = domain_hint.n_points;
  out.spectrum.h = domain_hint.h;

  std::vector<cplx> kept;
  if (ham.hermitian) {
    std::vector<double> diag = real_diagonal(ham);
    const int below = kernels::sturm_count_below(diag, ham.off_diagonal, plateau.real());
    const int k = std::min(count, below);
    out.spectrum.method = SpectrumMethod::OracleReal;
    if (k > 0) {
      std::vector<double> vals = kernels::par::lowest_eigenvalues(diag, ham.off_diagonal, k);
      kept.assign(vals.begin(), vals.end());
    }
  } else {
    SpectrumResult all = eigen_complex(ham);
    out.spectrum.method = SpectrumMethod::OracleComplex;
    for (const cplx& e : all.eigenvalues)
      if (e.real() < plateau.real() && static_cast<int>(kept.size()) < count) kept.push_back(e);
  }
  out.spectrum.eigenvalues = kept;

  for (const cplx& e : kept) {
    SampledFunction psi = eigenvector(ham, e);
    const double m = max_abs(psi);
    const double edge = std::max(std::abs(psi.values[1]), std::abs(psi.values[psi.size() - 2]));
    if (edge > 1e-6 * m)
      out.spectrum.warnings.push_back(
          "eigenfunction at E = " + std::to_string(e.real()) +
          " touches the boundary; domain may be too small");
    out.eigenfunctions.push_back(std::move(psi));
  }
  return out;
}

SpectrumResult refine_until(const RefineProblem& p, double target_tol, int max_doublings) {
  if (max_doublings < 1 || max_doublings > 6)
    throw Error(ErrorKind::InvalidArgument, "refine_until allows 1..6 doublings");
  if (p.n0 < 5) throw Error(ErrorKind::InvalidArgument, "refine_until needs n0 >= 5");

  auto solve = [&](int n) {
    Grid g = Grid::uniform(p.x_min, p.x_max, n);
    SampledFunction vs = SampledFunction::tabulate(g, p.potential);
    TridiagonalHamiltonian ham = discretize(vs, p.mu);
    std::vector<cplx> ev;
    if (!p.complex_solver && ham.hermitian) {
      SpectrumResult r = eigen_real(ham, p.k);
      ev = r.eigenvalues;
    } else {
      SpectrumResult r = eigen_complex(ham);
      ev.assign(r.eigenvalues.begin(),
                r.eigenvalues.begin() + std::min<size_t>(p.k, r.eigenvalues.size()));
    }
    return ev;
  };

  int n = p.n0;
  std::vector<cplx> prev = solve(n);
  std::vector<cplx> rich_prev;
  SpectrumResult out;
  out.method = p.complex_solver ? SpectrumMethod::OracleComplex : SpectrumMethod::OracleReal;
  out.converged = false;
  out.eigenvalues = prev;
  out.n_points = n;
  out.h = (p.x_max - p.x_min) / (n - 1);

  for (int level = 1; level <= max_doublings; ++level) {
    n = 2 * n - 1;
    std::vector<cplx> cur;
    try {
      cur = solve(n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SizeCap) throw;
      out.warnings.push_back(std::string("refinement stopped: ") + e.what());
      break;
    }
    const size_t k = std::min(cur.size(), prev.size());
    std::vector<cplx> rich(k);
    std::vector<double> change(k);
    double worst_raw = 0.0;
    for (size_t i = 0; i < k; ++i) {
      change[i] = std::abs(cur[i] - prev[i]);
      worst_raw = std::max(worst_raw, change[i]);
      rich[i] = (4.0 * cur[i] - prev[i]) / 3.0;
    }
    out.change_history.push_back(worst_raw);
    out.doublings_used = level;

    double worst_rich = std::numeric_limits<double>::infinity();
    if (!rich_prev.empty()) {
      worst_rich = 0.0;
      for (size_t i = 0; i < std::min(rich.size(), rich_prev.size()); ++i)
        worst_rich = std::max(worst_rich, std::abs(rich[i] - rich_prev[i]));
    }

    out.eigenvalues = cur;
    out.richardson = rich;
    out.convergence_estimate = change;
    out.n_points = n;
    out.h = (p.x_max - p.x_min) / (n - 1);

    if (worst_raw <= target_tol || worst_rich <= target_tol) {
      out.converged = true;
      break;
    }
    prev = std::move(cur);
    rich_prev = std::move(rich);
  }
  if (!out.converged)
    out.warnings.push_back("refinement budget exhausted above the requested tolerance");
  return out;
}

}  // namespace psusy
