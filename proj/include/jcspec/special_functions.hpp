#pragma once

// Generalized Laguerre polynomials, log-factorials and the displaced-oscillator
// overlaps P^(m)_n(g) = <e_n| U(g) |e_m>, with an independent contour-integral
// evaluation of the same overlaps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "jcspec/error.hpp"
#include "jcspec/matrix.hpp"

namespace jcspec {

/// ln(n!) via lgamma; exact zero for n <= 1.
inline double log_factorial(std::int64_t n) {
  if (n < 0) throw Error(Errc::NegativeArgument, "log_factorial of a negative integer");
  if (n <= 1) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// L_n^s(x) by the three-term recurrence in the degree.
///
/// Integer orders s < 0 follow the reciprocal-factorial convention of the
/// explicit sum (terms with (i+s)! for i+s < 0 vanish), which is what the
/// recurrence produces for the polynomial sum_i (-1)^i C(n+s, n-i) x^i / i!.
inline double laguerre(int n, int s, double x) {
  if (n < 0) throw Error(Errc::NegativeArgument, "Laguerre degree must be >= 0");
  if (x < 0.0) throw Error(Errc::NegativeArgument, "Laguerre argument must be >= 0");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + s - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + s - x) * cur - (k + s) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Amplitude of the large-degree oscillation of L_n^s(x):
/// pi^{-1/2} n^{s/2-1/4} x^{-s/2-1/4} e^{x/2}.
inline double laguerre_envelope(int n, int s, double x) {
  if (n < 1) throw Error(Errc::IndexOutOfRange, "asymptotic form needs n >= 1");
  if (!(x > 0.0)) throw Error(Errc::NonPositiveX, "asymptotic form needs x > 0");
  const double logv = -0.5 * std::log(std::numbers::pi) + (0.5 * s - 0.25) * std::log(double(n)) +
                      (-0.5 * s - 0.25) * std::log(x) + 0.5 * x;
  return std::exp(logv);
}

/// Leading term of the large-n asymptotic of L_n^s(x) (O(n^{-1/2}) dropped).
inline double laguerre_asymptotic(int n, int s, double x) {
  const double env = laguerre_envelope(n, s, x);
  const double phase = 2.0 * std::sqrt(n * x) - s * std::numbers::pi / 2.0 - std::numbers::pi / 4.0;
  return env * std::cos(phase);
}

namespace detail {

/// Walks l_d = sqrt(d!/(d+s)!) L_d^s(x) upward in the degree d, keeping the
/// running value in [1e-150, 1e150] with a separate log scale.
class NormalizedLaguerre {
 public:
  NormalizedLaguerre(int order, double x) : s_(order), x_(x) {}

  int degree() const noexcept { return d_; }

  /// ln|l_d| + scale, excluding the 1/sqrt(s!) of l_0 (folded into the prefactor).
  double log_abs() const noexcept { return cur_ == 0.0 ? -INFINITY : log_scale_ + std::log(std::abs(cur_)); }
  double sign() const noexcept { return cur_ < 0.0 ? -1.0 : 1.0; }
  bool is_zero() const noexcept { return cur_ == 0.0; }

  void advance() {
    const double d = d_;
    const double s = s_;
    const double next =
        ((2.0 * d + 1.0 + s - x_) * cur_ - std::sqrt(d * (d + s)) * prev_) / std::sqrt((d + 1.0) * (d + 1.0 + s));
    prev_ = cur_;
    cur_ = next;
    ++d_;
    constexpr double big = 1e150;
    constexpr double small = 1e-150;
    if (std::abs(cur_) > big) {
      cur_ /= big;
      prev_ /= big;
      log_scale_ += std::log(big);
    } else if (cur_ != 0.0 && std::abs(cur_) < small && std::abs(prev_) < small) {
      cur_ *= big;
      prev_ *= big;
      log_scale_ -= std::log(big);
    }
  }

 private:
  int s_;
  double x_;
  int d_ = 0;
  double prev_ = 0.0;
  double cur_ = 1.0;
  double log_scale_ = 0.0;
};

/// ln of e^{-x/2} x^{s/2} / sqrt(s!) for x > 0.
inline double overlap_log_prefactor(int s, double x) {
  return -0.5 * x + 0.5 * s * std::log(x) - 0.5 * log_factorial(s);
}

inline void check_overlap_args(double coupling, double omega) {
  if (!std::isfinite(coupling) || !std::isfinite(omega)) throw Error(Errc::NonFinite, "overlap arguments must be finite");
  if (!(omega > 0.0)) throw Error(Errc::NonPositiveOmega, "omega must be > 0");
  if (coupling < 0.0) throw Error(Errc::NegativeCoupling, "coupling must be >= 0");
}

}  // namespace detail

/// P^(d+s)_d(coupling) for d = 0 .. count-1: one diagonal band of U at offset s >= 0.
inline std::vector<double> overlap_diagonal(int offset, std::size_t count, double coupling, double omega) {
  detail::check_overlap_args(coupling, omega);
  if (offset < 0) throw Error(Errc::IndexOutOfRange, "diagonal offset must be >= 0");
  std::vector<double> out(count, 0.0);
  if (coupling == 0.0) {
    if (offset == 0) std::fill(out.begin(), out.end(), 1.0);
    return out;
  }
  const double ratio = coupling / omega;
  const double x = ratio * ratio;
  const double log_pref = detail::overlap_log_prefactor(offset, x);
  detail::NormalizedLaguerre lag(offset, x);
  for (std::size_t d = 0; d < count; ++d) {
    if (d > 0) lag.advance();
    out[d] = lag.is_zero() ? 0.0 : lag.sign() * std::exp(lag.log_abs() + log_pref);
  }
  return out;
}

/// Displaced-oscillator overlap P^(m)_n(g) = <e_n|U(g)|e_m>.
///
/// For n <= m this is e^{-g^2/2w^2} sqrt(n!/m!) (g/w)^{m-n} L_n^{m-n}(g^2/w^2);
/// for n > m the relation P^(m)_n = (-1)^{m-n} P^(n)_m keeps the Laguerre
/// order nonnegative.
inline double displaced_overlap(int m, int n, double g, double omega) {
  detail::check_overlap_args(g, omega);
  if (m < 0 || n < 0) throw Error(Errc::IndexOutOfRange, "overlap indices must be >= 0");
  if (g == 0.0) return m == n ? 1.0 : 0.0;
  const int degree = std::min(m, n);
  const int order = std::abs(m - n);
  const double sign = (n > m && (order % 2 == 1)) ? -1.0 : 1.0;
  const double ratio = g / omega;
  const double x = ratio * ratio;
  detail::NormalizedLaguerre lag(order, x);
  for (int d = 0; d < degree; ++d) lag.advance();
  if (lag.is_zero()) return 0.0;
  return sign * lag.sign() * std::exp(lag.log_abs() + detail::overlap_log_prefactor(order, x));
}

struct ContourOverlap {
  double value = 0.0;
  double imag_residue = 0.0;  ///< |Im| of the quadrature, scaled like value
  std::size_t quad_points = 0;
  double radius = 1.0;
};

namespace detail {

/// Radius minimizing the Cauchy bound r^{-m} (r + a)^n e^{a r} of the
/// coefficient extraction; keeps the trapezoid sum free of cancellation.
inline double saddle_radius(int m, int n, double a) {
  if (a == 0.0) {
    // Integrand sqrt(m!/n!) v^{n-m}: pick |v| that makes it O(1).
    if (m == n) return 1.0;
    const double r = std::exp(0.5 * (log_factorial(m) - log_factorial(n)) / double(m - n));
    return std::clamp(r, 1e-3, 1e6);
  }
  const double b = a * a + n - m;
  const double r = (-b + std::sqrt(b * b + 4.0 * a * a * m)) / (2.0 * a);
  return std::clamp(r, 1e-3, 1e6);
}

inline std::complex<double> contour_trapezoid(int m, int n, double a, double radius, std::size_t points,
                                              double log_pref) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < points; ++j) {
    const double theta = 2.0 * std::numbers::pi * double(j) / double(points);
    const std::complex<double> v = std::polar(radius, theta);
    const std::complex<double> shifted = v - a;
    if (n > 0 && shifted == 0.0) continue;
    std::complex<double> logt = a * v - double(m) * std::log(v) + log_pref;
    if (n > 0) logt += double(n) * std::log(shifted);
    acc += std::exp(logt);
  }
  return acc / double(points);
}

}  // namespace detail

/// Overlap from the contour-integral representation, evaluated by the
/// trapezoid rule on a circle around the origin.
///
/// With a = g/omega and the substitution x = 1/(v/a) the integral reads
/// P = e^{-a^2/2} sqrt(m!/n!) [v^m] (v-a)^n e^{a v}; the coefficient is
/// extracted on the circle of saddle radius (any circle around 0 gives the
/// same integral, the unit circle loses all digits for m > n and small a).
/// Point count doubles from quad_points until two successive values agree to 1e-9.
inline ContourOverlap displaced_overlap_contour(int m, int n, double g, double omega, std::size_t quad_points = 64) {
  detail::check_overlap_args(g, omega);
  if (m < 0 || n < 0) throw Error(Errc::IndexOutOfRange, "overlap indices must be >= 0");
  if (quad_points < 64) throw Error(Errc::ArgumentError, "quad_points must be >= 64");
  const double a = g / omega;
  const double radius = detail::saddle_radius(m, n, a);
  const double log_pref = -0.5 * a * a + 0.5 * (log_factorial(m) - log_factorial(n));
  constexpr std::size_t max_points = std::size_t{1} << 16;
  constexpr double stability = 1e-9;

  std::complex<double> prev = detail::contour_trapezoid(m, n, a, radius, quad_points, log_pref);
  for (std::size_t points = 2 * quad_points; points <= max_points; points *= 2) {
    const std::complex<double> cur = detail::contour_trapezoid(m, n, a, radius, points, log_pref);
    if (std::abs(cur.real() - prev.real()) <= stability) {
      return ContourOverlap{cur.real(), std::abs(cur.imag()), points, radius};
    }
    prev = cur;
  }
  throw Error(Errc::NonConvergedQuadrature, "trapezoid sum not stable to 1e-9 at 65536 points");
}

/// Dense block of U(coupling): element (a, b) = P^(cols[b])_(rows[a]).
/// Each diagonal offset is evaluated with one recurrence pass.
inline Matrix overlap_block(std::span<const int> rows, std::span<const int> cols, double coupling, double omega) {
  detail::check_overlap_args(coupling, omega);
  std::unordered_map<int, int> max_degree;  // |offset| -> highest degree needed
  for (int r : rows) {
    for (int c : cols) {
      if (r < 0 || c < 0) throw Error(Errc::IndexOutOfRange, "overlap indices must be >= 0");
      auto [it, inserted] = max_degree.try_emplace(std::abs(c - r), std::min(r, c));
      if (!inserted) it->second = std::max(it->second, std::min(r, c));
    }
  }
  std::unordered_map<int, std::vector<double>> diagonals;
  for (const auto& [offset, degree] : max_degree) {
    diagonals.emplace(offset, overlap_diagonal(offset, std::size_t(degree) + 1, coupling, omega));
  }
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const int r = rows[a];
      const int c = cols[b];
      const int offset = std::abs(c - r);
      const double v = diagonals.at(offset)[std::size_t(std::min(r, c))];
      out(a, b) = (r > c && offset % 2 == 1) ? -v : v;
    }
  }
  return out;
}

inline std::vector<int> index_range(int begin, int end) {
  std::vector<int> out;
  if (end > begin) out.reserve(std::size_t(end - begin));
  for (int i = begin; i < end; ++i) out.push_back(i);
  return out;
}

/// Truncated U(coupling) with elements(n, m) = P^(m)_n.
class OverlapMatrix {
 public:
  OverlapMatrix(std::size_t n_basis, double coupling, double omega)
      : n_basis_(n_basis), coupling_(coupling), omega_(omega) {
    if (n_basis < 2) throw Error(Errc::DimensionTooSmall, "overlap matrix needs n_basis >= 2");
    const auto idx = index_range(0, int(n_basis));
    elements_ = overlap_block(idx, idx, coupling, omega);
    m_guard_ = n_basis / 2;
    defect_ = orthogonality_defect(m_guard_);
  }

  std::size_t n_basis() const noexcept { return n_basis_; }
  double coupling() const noexcept { return coupling_; }
  double omega() const noexcept { return omega_; }
  const Matrix& elements() const noexcept { return elements_; }

  /// P^(m)_n: row n, column m.
  double operator()(std::size_t n, std::size_t m) const noexcept { return elements_(n, m); }

  /// Defect recorded at construction over the default window m, k <= n_basis/2.
  double orthogonality_defect() const noexcept { return defect_; }
  std::size_t m_guard() const noexcept { return m_guard_; }

  /// max_{m,k <= window} |<col_m, col_k> - delta_mk| using the full truncated columns.
  double orthogonality_defect(std::size_t window) const {
    const std::size_t w = std::min(window + 1, n_basis_);
    double worst = 0.0;
    for (std::size_t m = 0; m < w; ++m) {
      for (std::size_t k = m; k < w; ++k) {
        double dot = 0.0;
        for (std::size_t n = 0; n < n_basis_; ++n) dot += elements_(n, m) * elements_(n, k);
        worst = std::max(worst, std::abs(dot - (m == k ? 1.0 : 0.0)));
      }
    }
    return worst;
  }

 private:
  std::size_t n_basis_;
  double coupling_;
  double omega_;
  Matrix elements_;
  std::size_t m_guard_ = 0;
  double defect_ = 0.0;
};

inline OverlapMatrix overlap_matrix(std::size_t n_basis, double g, double omega) {
  return OverlapMatrix(n_basis, g, omega);
}

}  // namespace jcspec
