#pragma once

// Truncated Jacobi matrices H1, H2, A0 and their spectra.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "jcspec/error.hpp"
#include "jcspec/matrix.hpp"
#include "jcspec/model.hpp"

namespace jcspec {

/// Real symmetric tridiagonal matrix: diag has N entries, offdiag N-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
  MatrixKind label = MatrixKind::A0;

  std::size_t size() const noexcept { return diag.size(); }

  /// Maximum absolute row sum.
  double norm_inf() const noexcept {
    double worst = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      double row = std::abs(diag[i]);
      if (i > 0) row += std::abs(offdiag[i - 1]);
      if (i + 1 < n) row += std::abs(offdiag[i]);
      worst = std::max(worst, row);
    }
    return worst;
  }
};

/// First n_basis rows/columns of A0, H1 or H2. Off-diagonals are g sqrt(k+1)
/// for all three; the diagonals are
///   A0: omega0 + k omega
///   H1: omega0 + k omega (k even), 2 omega0 + k omega (k odd)
///   H2: 2 omega0 + k omega (k even), omega0 + k omega (k odd)
inline SymTridiagonal build_matrix(MatrixKind kind, const ModelParams& p, std::size_t n_basis) {
  if (n_basis < 2) throw Error(Errc::DimensionTooSmall, "Jacobi matrix needs n_basis >= 2");
  SymTridiagonal t;
  t.label = kind;
  t.diag.resize(n_basis);
  t.offdiag.resize(n_basis - 1);
  for (std::size_t k = 0; k < n_basis; ++k) {
    const bool even = k % 2 == 0;
    double atomic = p.omega0();
    if (kind == MatrixKind::H1 && !even) atomic = 2.0 * p.omega0();
    if (kind == MatrixKind::H2 && even) atomic = 2.0 * p.omega0();
    t.diag[k] = atomic + double(k) * p.omega();
  }
  for (std::size_t k = 0; k + 1 < n_basis; ++k) t.offdiag[k] = p.g() * std::sqrt(double(k + 1));
  return t;
}

/// Number of eigenvalues of t strictly below x (Sturm sequence / LDL^T inertia).
inline std::size_t sturm_count(const SymTridiagonal& t, double x) {
  const std::size_t n = t.size();
  double max_e2 = 0.0;
  for (double e : t.offdiag) max_e2 = std::max(max_e2, e * e);
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, max_e2);
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    const double e = t.offdiag[i - 1];
    q = t.diag[i] - x - (e * e) / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

/// Gershgorin interval containing the whole spectrum.
inline std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

/// Eigenvalues with indices lo..hi (ascending, 0-based) by Sturm bisection.
/// Each value is the midpoint of a bracket [a, b] with count(a) <= j < count(b)
/// and b - a <= tol. Throws BisectionStall when the bracket cannot shrink to tol.
/// tol = 0 bisects until the bracket endpoints are adjacent doubles.
inline std::vector<double> eigenvalues_sturm(const SymTridiagonal& t, std::size_t lo, std::size_t hi,
                                             double tol = 1e-12) {
  const std::size_t n = t.size();
  if (lo > hi || hi >= n) throw Error(Errc::IndexOutOfRange, "need 0 <= lo <= hi < N");
  if (!(tol >= 0.0)) throw Error(Errc::ArgumentError, "bisection tolerance must be >= 0");
  const auto [gl, gu] = gershgorin_bounds(t);
  const std::size_t count = hi - lo + 1;
  std::vector<double> lower(count, gl);
  std::vector<double> upper(count, gu);

  // Every Sturm evaluation tightens the brackets of all requested indices.
  auto probe = [&](double x) {
    const std::size_t c = sturm_count(t, x);
    for (std::size_t k = 0; k < count; ++k) {
      if (lo + k < c) {
        upper[k] = std::min(upper[k], x);
      } else {
        lower[k] = std::max(lower[k], x);
      }
    }
  };

  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) lower[k] = std::max(lower[k], lower[k - 1]);
    while (upper[k] - lower[k] > tol) {
      const double mid = lower[k] + 0.5 * (upper[k] - lower[k]);
      if (mid <= lower[k] || mid >= upper[k]) {
        if (tol == 0.0) break;
        throw Error(Errc::BisectionStall, "bracket reached rounding level above tolerance");
      }
      probe(mid);
    }
    out[k] = lower[k] + 0.5 * (upper[k] - lower[k]);
  }
  return out;
}

namespace detail {

/// LU factorization with partial pivoting of a general tridiagonal matrix
/// (the LAPACK dgttrf/dgtts2 scheme), used for shifted solves.
struct TridiagonalLU {
  std::vector<double> dl, d, du, du2;
  std::vector<std::size_t> ipiv;

  TridiagonalLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper, double tiny)
      : dl(std::move(lower)), d(std::move(diag)), du(std::move(upper)) {
    const std::size_t n = d.size();
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    ipiv.resize(n);
    std::iota(ipiv.begin(), ipiv.end(), std::size_t{0});
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] != 0.0) {
          const double fact = dl[i] / d[i];
          dl[i] = fact;
          d[i + 1] -= fact * du[i];
        }
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        ipiv[i] = i + 1;
      }
    }
    // An exactly singular shift means lambda hit an eigenvalue; nudge the pivot.
    for (double& piv : d) {
      if (std::abs(piv) < tiny) piv = piv < 0.0 ? -tiny : tiny;
    }
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (ipiv[i] == i) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  }
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline std::vector<double> apply(const SymTridiagonal& t, const std::vector<double>& v) {
  const std::size_t n = t.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = t.diag[i] * v[i];
    if (i > 0) acc += t.offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) acc += t.offdiag[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

}  // namespace detail

/// Unit eigenvector for an eigenvalue estimate lambda by inverse iteration.
/// Sign convention: the largest-magnitude component is positive.
/// Throws NotAnEigenvalue when ||T v - lambda v|| <= 1e-8 ||T|| is not reached.
inline std::vector<double> eigenvector_inverse_iteration(const SymTridiagonal& t, double lambda) {
  const std::size_t n = t.size();
  const double tnorm = std::max(t.norm_inf(), std::numeric_limits<double>::min());
  std::vector<double> shifted(t.diag);
  for (double& x : shifted) x -= lambda;
  const detail::TridiagonalLU lu(t.offdiag, shifted, t.offdiag, std::numeric_limits<double>::epsilon() * tnorm);

  // Deterministic start vector with no special alignment to the basis.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * double(i));

  constexpr int max_iterations = 12;
  for (int it = 0; it < max_iterations; ++it) {
    lu.solve(v);
    const double nrm = detail::norm2(v);
    if (!std::isfinite(nrm) || nrm == 0.0) break;
    for (double& x : v) x /= nrm;
    auto tv = detail::apply(t, v);
    for (std::size_t i = 0; i < n; ++i) tv[i] -= lambda * v[i];
    if (detail::norm2(tv) <= 1e-8 * tnorm) {
      const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
      if (*big < 0.0) {
        for (double& x : v) x = -x;
      }
      return v;
    }
  }
  throw Error(Errc::NotAnEigenvalue, "inverse iteration residual did not reach 1e-8 ||T||");
}

/// Eigenvalues (ascending), optional eigenvectors (columns) and the
/// truncation-convergence certificate.
struct SpectralResult {
  std::vector<double> eigenvalues;
  std::optional<Matrix> eigenvectors;
  std::size_t converged_upto = 0;
  Truncation truncation;
};

/// Full eigensystem by cyclic Jacobi rotations on the dense form of t.
/// Brute-force reference for N <= 64.
inline SpectralResult dense_eig_oracle(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  if (n > 64) throw Error(Errc::DimensionTooLarge, "dense oracle is limited to N <= 64");
  if (n < 1) throw Error(Errc::DimensionTooSmall, "empty matrix");
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = t.diag[i];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = t.offdiag[i];
  }
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));

  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > 1e-300 + 1e-17 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double tan_rot = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tan_rot * tan_rot + 1.0);
        const double s = tan_rot * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SpectralResult out;
  out.eigenvalues.resize(n);
  Matrix vecs(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) vecs(r, c) = v(r, order[c]);
  }
  out.eigenvectors = std::move(vecs);
  out.converged_upto = n - 1;
  out.truncation = Truncation{n, n > 1 ? n - 1 : 0, 0.0};
  return out;
}

struct SpectrumOptions {
  std::size_t max_n = std::size_t{1} << 15;
};

/// Eigenvalues 0..m_max of the infinite matrix, certified by doubling the
/// truncation from max(4 m_max, 64) until |lambda_m(N) - lambda_m(2N)| <= tol_abs
/// for every m <= m_max. The returned values come from the larger truncation and
/// are bisected to full double resolution.
inline SpectralResult converged_spectrum(MatrixKind kind, const ModelParams& p, std::size_t m_max, double tol_abs,
                                         SpectrumOptions opts = {}) {
  if (!(tol_abs > 0.0)) throw Error(Errc::ArgumentError, "tol_abs must be positive");
  std::size_t n = std::max<std::size_t>(4 * m_max, 64);
  if (2 * n > opts.max_n) {
    throw Error(Errc::NoConvergence, "initial truncation already exceeds the cap");
  }
  std::vector<double> coarse = eigenvalues_sturm(build_matrix(kind, p, n), 0, m_max, 0.0);
  while (2 * n <= opts.max_n) {
    std::vector<double> fine = eigenvalues_sturm(build_matrix(kind, p, 2 * n), 0, m_max, 0.0);
    std::size_t stable = 0;
    while (stable <= m_max && std::abs(fine[stable] - coarse[stable]) <= tol_abs) ++stable;
    if (stable > m_max) {
      SpectralResult out;
      out.eigenvalues = std::move(fine);
      out.converged_upto = m_max;
      out.truncation = Truncation{2 * n, std::max<std::size_t>(m_max, 1), tol_abs};
      return out;
    }
    coarse = std::move(fine);
    n *= 2;
  }
  throw Error(Errc::NoConvergence, "eigenvalues not stable to tol_abs within the truncation cap");
}

inline SpectralResult converged_spectrum(Variant v, const ModelParams& p, std::size_t m_max, double tol_abs,
                                         SpectrumOptions opts = {}) {
  return converged_spectrum(to_matrix_kind(v), p, m_max, tol_abs, opts);
}

}  // namespace jcspec
