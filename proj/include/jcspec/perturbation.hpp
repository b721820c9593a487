#pragma once

// Perturbation series of the H1/H2 eigenvalues in powers of the atomic
// frequency omega0, around the exactly solvable shifted oscillator A0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "jcspec/error.hpp"
#include "jcspec/matrix.hpp"
#include "jcspec/model.hpp"
#include "jcspec/projectors.hpp"
#include "jcspec/special_functions.hpp"

namespace jcspec {

inline constexpr int kDefaultOrderCap = 5;

/// Nonnegative parts n_1..n_k with n_1 + ... + n_k = k - 1.
using Composition = std::vector<int>;

/// N_k = (2k-2)! / ((k-1)!)^2, the number of compositions at order k.
inline std::uint64_t composition_count(int k) {
  if (k < 1) throw Error(Errc::OrderTooLow, "order must be >= 1");
  std::uint64_t c = 1;  // C(2k-2, k-1), built incrementally and exactly
  for (int i = 1; i <= k - 1; ++i) c = c * std::uint64_t(k - 1 + i) / std::uint64_t(i);
  return c;
}

/// All compositions of k-1 into k nonnegative parts, in lexicographic order.
inline std::vector<Composition> compositions(int k) {
  if (k < 1) throw Error(Errc::OrderTooLow, "order must be >= 1");
  std::vector<Composition> out;
  out.reserve(composition_count(k));
  Composition cur(std::size_t(k), 0);
  auto fill = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == cur.size()) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  fill(fill, 0, k - 1);
  return out;
}

/// Unperturbed eigenvalue m omega + omega0 - g^2/omega.
inline double lambda0(int m, const ModelParams& p) {
  return m * p.omega() + p.omega0() - p.g() * p.g() / p.omega();
}

/// First-order correction omega0 P_{m,m}:
/// omega0/2 -/+ (-1)^m omega0/2 e^{-2g^2/w^2} L_m(4g^2/w^2), minus for H1, plus for H2.
inline double lambda1(Variant v, int m, const ModelParams& p) {
  const double diag = displaced_overlap(m, m, 2.0 * p.g(), p.omega());  // e^{-2g^2/w^2} L_m(4g^2/w^2)
  const double sign = v == Variant::H2 ? 1.0 : -1.0;
  const double parity = m % 2 == 0 ? 1.0 : -1.0;
  return 0.5 * p.omega0() + sign * parity * 0.5 * p.omega0() * diag;
}

namespace detail {

/// P^(m)_j(2g) over a certified window, as (index, value) pairs.
inline std::vector<double> doubled_column(const IndexWindow& w, const ModelParams& p) {
  const std::vector<int> col{w.target};
  const Matrix u = overlap_block(w.indices, col, 2.0 * p.g(), p.omega());
  return u.column(0);
}

}  // namespace detail

/// Second-order correction (omega0^2 / 4 omega) sum_{k != m} P^(m)_k(2g)^2 / (m - k).
/// Identical for H1 and H2 (only squares of off-diagonal elements enter).
inline double lambda2(Variant /*v*/, int m, const ModelParams& p) {
  if (p.g() == 0.0 || p.omega0() == 0.0) return 0.0;
  const IndexWindow w = certified_window(m, p);
  const auto u = detail::doubled_column(w, p);
  double t = 0.0;
  for (std::size_t a = 0; a < w.indices.size(); ++a) {
    const int k = w.indices[a];
    if (k == m) continue;
    t += u[a] * u[a] / double(m - k);
  }
  return p.omega0() * p.omega0() / (4.0 * p.omega()) * t;
}

/// Third-order correction
/// (omega0^3/omega^2) [ sum_{i,j != m} P_mi P_ij P_jm / ((i-m)(j-m)) - P_mm sum_{i != m} P_mi^2/(i-m)^2 ]
/// with P the projector of the variant in the A0 eigenbasis.
inline double lambda3(Variant v, int m, const ModelParams& p) {
  if (p.g() == 0.0 || p.omega0() == 0.0) return 0.0;
  const IndexWindow w = certified_window(m, p);
  const auto pm = projector_matrix(projector_for(v), p, w.indices);
  const std::size_t c = w.target_pos;
  const std::size_t n = w.indices.size();
  double dbl = 0.0;
  double single = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (a == c) continue;
    const double da = double(w.indices[a] - m);
    single += pm.elements(c, a) * pm.elements(c, a) / (da * da);
    double inner = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == c) continue;
      inner += pm.elements(a, b) * pm.elements(b, c) / double(w.indices[b] - m);
    }
    dbl += pm.elements(c, a) * inner / da;
  }
  const double w0 = p.omega0();
  return w0 * w0 * w0 / (p.omega() * p.omega()) * (dbl - pm.elements(c, c) * single);
}

/// Order-k corrections from the trace formula
///   lambda^(k) = ((-omega0)^k / k) sum_{compositions} tr[P S^{n1} ... P S^{nk}],
/// S^0 = -|a_m><a_m|, S^n = omega^{-n} sum_{i != m} |a_i><a_i| / (i - m)^n,
/// evaluated on a certified window of the A0 eigenbasis.
class KatoEngine {
 public:
  KatoEngine(Variant v, int m, const ModelParams& p, int half_width = -1)
      : variant_(v), m_(m), params_(p), window_(certified_window(m, p, half_width)),
        projector_(projector_matrix(projector_for(v), p, window_.indices)) {}

  Variant variant() const noexcept { return variant_; }
  int target() const noexcept { return m_; }
  const IndexWindow& window() const noexcept { return window_; }
  const ProjectorMatrix& projector() const noexcept { return projector_; }

  /// tr[P S^{n1} P S^{n2} ... P S^{nk}] for one composition.
  double trace(const Composition& parts) const {
    const std::size_t k = parts.size();
    // Every composition has a zero part; rotate it to the end so the trace
    // collapses to -<a_m| P S^{n'1} ... S^{n'(k-1)} P |a_m>.
    const auto zero = std::find(parts.begin(), parts.end(), 0);
    if (zero == parts.end()) throw Error(Errc::ArgumentError, "composition without a zero part");
    Composition rotated(zero + 1, parts.end());
    rotated.insert(rotated.end(), parts.begin(), zero + 1);

    const std::size_t c = window_.target_pos;
    std::vector<double> w = projector_.elements.column(c);
    for (std::size_t j = k - 1; j-- > 0;) {
      apply_resolvent_power(rotated[j], w);
      w = multiply(projector_.elements, w);
    }
    return -w[c];
  }

  /// Individual terms ((-omega0)^k / k) tr[...], one per composition of compositions(k).
  std::vector<double> terms(int k) const {
    check_order(k);
    const double scale = std::pow(-params_.omega0(), k) / double(k);
    std::vector<double> out;
    for (const auto& comp : compositions(k)) out.push_back(scale * trace(comp));
    return out;
  }

  double correction(int k) const {
    const auto t = terms(k);
    double s = 0.0;
    for (double x : t) s += x;
    return s;
  }

  int order_cap() const noexcept { return order_cap_; }
  void set_order_cap(int cap) noexcept { order_cap_ = cap; }

 private:
  void check_order(int k) const {
    if (k < 1) throw Error(Errc::OrderTooLow, "trace formula needs k >= 1");
    if (k > order_cap_) throw Error(Errc::OrderTooHigh, "order above the configured cap");
  }

  /// w <- D(n) w with D(0) = -e_m e_m^T and D(n)_ii = 1/(omega (i - m))^n, D(n)_mm = 0.
  void apply_resolvent_power(int n, std::vector<double>& w) const {
    const std::size_t c = window_.target_pos;
    if (n == 0) {
      const double wm = w[c];
      std::fill(w.begin(), w.end(), 0.0);
      w[c] = -wm;
      return;
    }
    for (std::size_t a = 0; a < w.size(); ++a) {
      if (a == c) {
        w[a] = 0.0;
        continue;
      }
      const double gap = params_.omega() * double(window_.indices[a] - m_);
      w[a] /= std::pow(gap, n);
    }
  }

  Variant variant_;
  int m_;
  ModelParams params_;
  IndexWindow window_;
  ProjectorMatrix projector_;
  int order_cap_ = kDefaultOrderCap;
};

inline double kato_correction(int k, Variant v, int m, const ModelParams& p, int order_cap = kDefaultOrderCap) {
  if (k < 1) throw Error(Errc::OrderTooLow, "trace formula needs k >= 1");
  if (k > order_cap) throw Error(Errc::OrderTooHigh, "order above the configured cap");
  KatoEngine engine(v, m, p);
  engine.set_order_cap(order_cap);
  return engine.correction(k);
}

/// sigma_m = [ sum_{j != m} P^(m)_j(2g)^2 / (j - m)^2 ]^{1/2}.
inline double sigma_m(int m, const ModelParams& p) {
  if (p.g() == 0.0) return 0.0;
  const IndexWindow w = certified_window(m, p);
  const auto u = detail::doubled_column(w, p);
  double s = 0.0;
  for (std::size_t a = 0; a < w.indices.size(); ++a) {
    const int j = w.indices[a];
    if (j == m) continue;
    const double d = double(j - m);
    s += u[a] * u[a] / (d * d);
  }
  return std::sqrt(s);
}

/// f_m = [ sum_{k=1}^m 1/k^2 + pi^2/6 ]^{1/2} < pi/sqrt(3).
inline double f_m(int m) {
  double s = std::numbers::pi * std::numbers::pi / 6.0;
  for (int k = 1; k <= m; ++k) s += 1.0 / (double(k) * double(k));
  return std::sqrt(s);
}

/// C_{m,n} = P^(m)_{m-n}(2g)^2 - P^(m)_{m+n}(2g)^2 for n <= m, -P^(m)_{m+n}(2g)^2 for n > m.
inline double hardy_coefficient(int m, int n, const ModelParams& p) {
  if (m < 0 || n < 1) throw Error(Errc::IndexOutOfRange, "need m >= 0 and n >= 1");
  const double coupling = 2.0 * p.g();
  const double up = displaced_overlap(m, m + n, coupling, p.omega());
  if (n > m) return -up * up;
  const double down = displaced_overlap(m, m - n, coupling, p.omega());
  return down * down - up * up;
}

struct HardyDiagnostics {
  double t_m = 0.0;
  double row_abs_sum = 0.0;    ///< sum_n |C_{m,n}|
  double diag_overlap = 0.0;   ///< P^(m)_m(2g)
  std::vector<std::pair<int, double>> c_mn_samples;  ///< (n, C_{m,n})
};

/// t_m = sum_{k != m} P^(m)_k(2g)^2/(m-k), the absolute row sum of C and samples C_{m,n}.
inline HardyDiagnostics hardy_diagnostics(int m, const ModelParams& p, const std::vector<int>& sample_n = {1, 2, 3, 4, 5}) {
  HardyDiagnostics out;
  const IndexWindow w = certified_window(m, p);
  const auto u = detail::doubled_column(w, p);
  auto value_at = [&](int j) -> double {
    if (j < 0) return 0.0;
    const auto it = std::lower_bound(w.indices.begin(), w.indices.end(), j);
    if (it == w.indices.end() || *it != j) return 0.0;  // outside the certified window
    return u[std::size_t(it - w.indices.begin())];
  };
  for (std::size_t a = 0; a < w.indices.size(); ++a) {
    const int k = w.indices[a];
    if (k != m) out.t_m += u[a] * u[a] / double(m - k);
  }
  out.diag_overlap = u[w.target_pos];
  const int reach = w.indices.back() - m;
  for (int n = 1; n <= std::max(reach, m); ++n) {
    const double up = value_at(m + n);
    const double c = n <= m ? value_at(m - n) * value_at(m - n) - up * up : -up * up;
    out.row_abs_sum += std::abs(c);
  }
  for (int n : sample_n) out.c_mn_samples.emplace_back(n, hardy_coefficient(m, n, p));
  return out;
}

/// Finite-range certificate that |1 + s (-1)^m P^(m)_m(2g)| < pi/sqrt(3) for all
/// m in [first_valid, horizon]; s = +1 for H2, -1 for H1. The remainder bound
/// may be applied for first_valid <= m <= horizon.
struct M0Certificate {
  int first_valid = 0;
  int horizon = 0;
};

inline M0Certificate find_m0(const ModelParams& p, int horizon, Variant v = Variant::H2) {
  if (horizon < 1) throw Error(Errc::ArgumentError, "horizon must be >= 1");
  const auto diag = overlap_diagonal(0, std::size_t(horizon) + 1, 2.0 * p.g(), p.omega());
  const double s = v == Variant::H2 ? 1.0 : -1.0;
  auto holds = [&](int m) {
    const double parity = m % 2 == 0 ? 1.0 : -1.0;
    return std::abs(1.0 + s * parity * diag[std::size_t(m)]) < kPiOverSqrt3;
  };
  int first = horizon + 1;
  while (first > 0 && holds(first - 1)) --first;
  // The condition alternates with the parity of m, so a certificate must
  // cover at least one index of each parity.
  if (first > horizon - 1) {
    throw Error(Errc::NotFoundWithinHorizon, "condition fails at the end of the scanned range");
  }
  return M0Certificate{first, horizon};
}

inline constexpr int kDefaultM0Horizon = 2000;

/// (omega0/2)^k / (k omega^{k-1}) (pi/sqrt 3)^{k-2} sigma_m: bound on each trace term at order k.
inline double term_bound(int k, double sigma, const ModelParams& p) {
  return std::pow(p.omega0() / 2.0, k) / (k * std::pow(p.omega(), k - 1)) * std::pow(kPiOverSqrt3, k - 2) * sigma;
}

/// N_k times term_bound: bound on |lambda^(k)_m| for k > 2 and m past the certificate.
inline double order_bound(int k, double sigma, const ModelParams& p) {
  return double(composition_count(k)) * term_bound(k, sigma, p);
}

/// (3 omega / 4 pi^2) sigma_m q^n / (1 - q): bound on |lambda_m - sum_{k<=n} lambda^(k)_m|.
inline double remainder_bound(int n, int m, const ModelParams& p, const M0Certificate& cert) {
  if (n <= 2) throw Error(Errc::OrderTooLow, "remainder bound needs n > 2");
  if (!(p.q() < 1.0)) throw Error(Errc::OutsideConvergentRegime, "remainder bound needs q < 1");
  if (m < cert.first_valid || m > cert.horizon) throw Error(Errc::M0NotCertified, "m outside the m0 certificate");
  if (p.omega0() == 0.0) return 0.0;
  const double q = p.q();
  return 3.0 * p.omega() / (4.0 * std::numbers::pi * std::numbers::pi) * sigma_m(m, p) * std::pow(q, n) / (1.0 - q);
}

inline double remainder_bound(int n, int m, const ModelParams& p, Variant v = Variant::H2) {
  if (n <= 2) throw Error(Errc::OrderTooLow, "remainder bound needs n > 2");
  if (!(p.q() < 1.0)) throw Error(Errc::OutsideConvergentRegime, "remainder bound needs q < 1");
  M0Certificate cert;
  try {
    cert = find_m0(p, std::max(kDefaultM0Horizon, m + 1), v);
  } catch (const Error& e) {
    if (e.code() == Errc::NotFoundWithinHorizon) throw Error(Errc::M0NotCertified, e.what());
    throw;
  }
  return remainder_bound(n, m, p, cert);
}

struct SeriesReport {
  int m = 0;
  Variant variant = Variant::H2;
  std::vector<double> corrections;   ///< lambda^(0) .. lambda^(k_max)
  std::vector<double> partial_sums;  ///< cumulative sums of corrections
  double sigma_m = 0.0;
  double t_m = 0.0;
  double q = 0.0;
  std::optional<M0Certificate> m0;
  std::vector<double> remainder_bounds;  ///< index n; NaN where undefined (n <= 2, q >= 1, m uncertified)
  std::vector<double> order_bounds;      ///< index k; bound on |lambda^(k)|, NaN for k <= 2
  std::vector<double> term_maxima;       ///< index k; max_j |term_j| of the trace sum, NaN for k = 0
};

inline SeriesReport series_report(Variant v, int m, const ModelParams& p, int k_max, int horizon = kDefaultM0Horizon,
                                  int order_cap = kDefaultOrderCap) {
  if (k_max < 0) throw Error(Errc::OrderTooLow, "k_max must be >= 0");
  if (k_max > order_cap) throw Error(Errc::OrderTooHigh, "k_max above the configured cap");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  SeriesReport r;
  r.m = m;
  r.variant = v;
  r.q = p.q();
  r.corrections.assign(std::size_t(k_max) + 1, 0.0);
  r.term_maxima.assign(std::size_t(k_max) + 1, nan);
  r.corrections[0] = lambda0(m, p);

  if (p.omega0() == 0.0) {
    // Series terminates: H1 = H2 = A0.
    for (int k = 1; k <= k_max; ++k) r.term_maxima[std::size_t(k)] = 0.0;
  } else {
    KatoEngine engine(v, m, p);
    engine.set_order_cap(order_cap);
    for (int k = 1; k <= k_max; ++k) {
      const auto terms = engine.terms(k);
      double sum = 0.0;
      double worst = 0.0;
      for (double t : terms) {
        sum += t;
        worst = std::max(worst, std::abs(t));
      }
      r.corrections[std::size_t(k)] = sum;
      r.term_maxima[std::size_t(k)] = worst;
    }
  }
  r.partial_sums.resize(r.corrections.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < r.corrections.size(); ++k) r.partial_sums[k] = acc += r.corrections[k];

  r.sigma_m = sigma_m(m, p);
  r.t_m = p.g() == 0.0 ? 0.0 : hardy_diagnostics(m, p, {}).t_m;
  try {
    r.m0 = find_m0(p, std::max(horizon, m + 1), v);
  } catch (const Error& e) {
    if (e.code() != Errc::NotFoundWithinHorizon) throw;
  }
  r.order_bounds.assign(std::size_t(k_max) + 1, nan);
  r.remainder_bounds.assign(std::size_t(k_max) + 1, nan);
  for (int k = 3; k <= k_max; ++k) {
    r.order_bounds[std::size_t(k)] = order_bound(k, r.sigma_m, p);
    if (r.m0 && p.q() < 1.0 && m >= r.m0->first_valid && m <= r.m0->horizon) {
      r.remainder_bounds[std::size_t(k)] = remainder_bound(k, m, p, *r.m0);
    }
  }
  return r;
}

}  // namespace jcspec
