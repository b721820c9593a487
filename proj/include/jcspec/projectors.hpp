#pragma once

// Parity projectors P1, P2 expressed in the eigenbasis of the shifted
// oscillator A0: P(1,2)_{k,m} = 1/2 delta_{k,m} -/+ (-1)^k/2 P^(m)_k(2g).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "jcspec/error.hpp"
#include "jcspec/matrix.hpp"
#include "jcspec/model.hpp"
#include "jcspec/special_functions.hpp"

namespace jcspec {

enum class Projector { P1, P2 };

constexpr Projector projector_for(Variant v) noexcept { return v == Variant::H1 ? Projector::P1 : Projector::P2; }

constexpr std::string_view to_string(Projector p) noexcept { return p == Projector::P1 ? "P1" : "P2"; }

namespace detail {
constexpr double parity_sign(int k) noexcept { return k % 2 == 0 ? 1.0 : -1.0; }
/// -1 for P1 (odd Fock states), +1 for P2 (even Fock states).
constexpr double projector_sign(Projector p) noexcept { return p == Projector::P1 ? -1.0 : 1.0; }
}  // namespace detail

/// Closed form of <a_k| P |a_m> through the overlap at doubled coupling.
inline double projector_element(Projector proj, int k, int m, const ModelParams& p) {
  const double delta = k == m ? 0.5 : 0.0;
  const double u = displaced_overlap(m, k, 2.0 * p.g(), p.omega());
  return delta + detail::projector_sign(proj) * 0.5 * detail::parity_sign(k) * u;
}

inline std::size_t default_parity_sum_length(int k, int m) { return 4 * std::size_t(std::max(k, m)) + 200; }

/// sum_{n odd (P1) / even (P2), n < n_sum} P^(k)_n(g) P^(m)_n(g) at coupling g.
/// Throws TailNotConverged if the last retained parity term exceeds 1e-12.
inline double projector_direct_sum(Projector proj, int k, int m, const ModelParams& p, std::size_t n_sum) {
  if (k < 0 || m < 0) throw Error(Errc::IndexOutOfRange, "projector indices must be >= 0");
  if (n_sum < 2) throw Error(Errc::DimensionTooSmall, "n_sum must be >= 2");
  const auto rows = index_range(0, int(n_sum));
  const std::vector<int> cols{k, m};
  const Matrix u = overlap_block(rows, cols, p.g(), p.omega());
  const std::size_t first = proj == Projector::P1 ? 1 : 0;
  double sum = 0.0;
  double last = 0.0;
  for (std::size_t n = first; n < n_sum; n += 2) {
    last = u(n, 0) * u(n, 1);
    sum += last;
  }
  if (std::abs(last) > 1e-12) throw Error(Errc::TailNotConverged, "parity sum tail above 1e-12; raise n_sum");
  return sum;
}

inline double projector_direct_sum(Projector proj, int k, int m, const ModelParams& p) {
  return projector_direct_sum(proj, k, m, p, default_parity_sum_length(k, m));
}

/// Index set around a target column m on which the Gaussian-decaying column
/// P^(m)_.(2g) is retained, with the certified dropped mass.
struct IndexWindow {
  std::vector<int> indices;  ///< ascending
  int target = 0;
  std::size_t target_pos = 0;  ///< position of target inside indices
  double dropped_mass = 0.0;   ///< 1 - sum_{j in window} P^(m)_j(2g)^2
};

/// Default half-width 8 sqrt(max(m,1)) g/omega + 40.
inline int default_half_width(int m, const ModelParams& p) {
  return int(std::floor(8.0 * std::sqrt(double(std::max(m, 1))) * p.coupling_ratio())) + 40;
}

namespace detail {

inline IndexWindow make_window(int m, const ModelParams& p, int half_width) {
  constexpr int low_block = 40;
  IndexWindow w;
  w.target = m;
  const int begin = std::max(0, m - half_width);
  for (int i = 0; i < std::min(low_block, begin); ++i) w.indices.push_back(i);
  for (int i = begin; i <= m + half_width; ++i) w.indices.push_back(i);
  w.target_pos = std::size_t(std::find(w.indices.begin(), w.indices.end(), m) - w.indices.begin());

  const std::vector<int> col{m};
  const Matrix u = overlap_block(w.indices, col, 2.0 * p.g(), p.omega());
  double kept = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i) kept += u(i, 0) * u(i, 0);
  w.dropped_mass = std::max(0.0, 1.0 - kept);
  return w;
}

}  // namespace detail

/// Window |i - m| <= half_width plus the low block i < 40. Throws
/// TailNotConverged when the column mass left outside exceeds 1e-12.
/// Without an explicit half_width the default is doubled (at most 8 times)
/// until the mass test passes; the default ignores the shift of the column
/// centre by (2g/omega)^2, which matters for small m and large g.
inline IndexWindow certified_window(int m, const ModelParams& p, int half_width = -1) {
  if (m < 0) throw Error(Errc::IndexOutOfRange, "target index must be >= 0");
  constexpr double max_dropped = 1e-12;
  if (half_width >= 0) {
    IndexWindow w = detail::make_window(m, p, half_width);
    if (w.dropped_mass > max_dropped) {
      throw Error(Errc::TailNotConverged, "overlap column mass outside the window exceeds 1e-12");
    }
    return w;
  }
  int hw = default_half_width(m, p);
  for (int attempt = 0; attempt <= 8; ++attempt, hw *= 2) {
    IndexWindow w = detail::make_window(m, p, hw);
    if (w.dropped_mass <= max_dropped) return w;
  }
  throw Error(Errc::TailNotConverged, "overlap column mass outside the window exceeds 1e-12 after widening");
}

/// Projector restricted to an index set: elements(a, b) = P_{indices[a], indices[b]}.
struct ProjectorMatrix {
  Projector variant = Projector::P2;
  std::vector<int> indices;
  Matrix elements;

  std::size_t n_basis() const noexcept { return indices.size(); }
};

inline ProjectorMatrix projector_matrix(Projector proj, const ModelParams& p, std::span<const int> indices) {
  ProjectorMatrix out;
  out.variant = proj;
  out.indices.assign(indices.begin(), indices.end());
  const Matrix u = overlap_block(indices, indices, 2.0 * p.g(), p.omega());
  out.elements = Matrix(indices.size(), indices.size());
  const double sgn = detail::projector_sign(proj);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const double row_sign = detail::parity_sign(indices[a]);
    for (std::size_t b = 0; b < indices.size(); ++b) {
      out.elements(a, b) = (a == b ? 0.5 : 0.0) + sgn * 0.5 * row_sign * u(a, b);
    }
  }
  return out;
}

/// Projector on the leading n_basis x n_basis block.
inline ProjectorMatrix projector_matrix(Projector proj, const ModelParams& p, std::size_t n_basis) {
  const auto idx = index_range(0, int(n_basis));
  return projector_matrix(proj, p, idx);
}

/// max |(P P - P)_{k,m}| over k, m < window, with the inner sum over n_basis indices.
inline double idempotency_defect(Projector proj, const ModelParams& p, std::size_t n_basis, std::size_t window) {
  if (window > n_basis / 2) throw Error(Errc::ArgumentError, "window must be <= n_basis/2");
  const auto pm = projector_matrix(proj, p, n_basis);
  double worst = 0.0;
  for (std::size_t k = 0; k < window; ++k) {
    for (std::size_t m = 0; m < window; ++m) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n_basis; ++l) acc += pm.elements(k, l) * pm.elements(l, m);
      worst = std::max(worst, std::abs(acc - pm.elements(k, m)));
    }
  }
  return worst;
}

/// Max elementwise defect of (B U(2g))^2 - E over the top-left window block,
/// B = diag((-1)^k). The inner index runs over the full truncation n_basis.
inline double bu_identity_defect(const ModelParams& p, std::size_t n_basis, std::size_t window) {
  if (window > n_basis / 2) throw Error(Errc::ArgumentError, "window must be <= n_basis/2");
  const auto win = index_range(0, int(window));
  const auto all = index_range(0, int(n_basis));
  const double coupling = 2.0 * p.g();
  const Matrix left = overlap_block(win, all, coupling, p.omega());   // P^(l)_i, i < window
  const Matrix right = overlap_block(all, win, coupling, p.omega());  // P^(j)_l, j < window
  double worst = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    for (std::size_t j = 0; j < window; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n_basis; ++l) acc += detail::parity_sign(int(l)) * left(i, l) * right(l, j);
      acc *= detail::parity_sign(int(i));
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace jcspec
