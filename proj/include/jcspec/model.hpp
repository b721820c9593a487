#pragma once

// Physical parameters of the two-level atom + single-mode field model and the
// truncation policy shared by every numerical module.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "jcspec/error.hpp"

namespace jcspec {

/// Largest atomic frequency (in units of omega) for which the omega0 series
/// is proven convergent: sqrt(3) / (2 pi).
inline constexpr double kConvergenceThreshold = 0.27566444771089604;  // sqrt(3)/(2*pi)

/// pi / sqrt(3), the recurring constant of the remainder estimates.
inline constexpr double kPiOverSqrt3 = 1.8137993642342178;

/// Validated model constants. Immutable; build with validate_params().
class ModelParams {
 public:
  double omega() const noexcept { return omega_; }
  double omega0() const noexcept { return omega0_; }
  double g() const noexcept { return g_; }

  /// q = 2 omega0 pi / (omega sqrt 3); the series ratio of the remainder bound.
  double q() const noexcept { return q_; }

  /// True iff 2 pi omega0 <= sqrt(3) omega up to one rounding unit.
  bool convergent() const noexcept { return convergent_; }

  /// g / omega, the dimensionless coupling.
  double coupling_ratio() const noexcept { return g_ / omega_; }

 private:
  friend ModelParams validate_params(double omega, double omega0, double g);
  ModelParams(double omega, double omega0, double g) noexcept
      : omega_(omega), omega0_(omega0), g_(g) {
    q_ = 2.0 * omega0_ * std::numbers::pi / (omega_ * std::numbers::sqrt3);
    const double lhs = 2.0 * std::numbers::pi * omega0_;
    const double rhs = std::numbers::sqrt3 * omega_;
    convergent_ = lhs <= rhs * (1.0 + std::numeric_limits<double>::epsilon());
  }

  double omega_;
  double omega0_;
  double g_;
  double q_;
  bool convergent_;
};

/// Checks omega > 0, omega0 >= 0, g >= 0 (all finite) and returns the
/// validated parameter set. Throws jcspec::Error otherwise.
inline ModelParams validate_params(double omega, double omega0, double g) {
  if (!std::isfinite(omega) || !std::isfinite(omega0) || !std::isfinite(g)) {
    throw Error(Errc::NonFinite, "model parameters must be finite");
  }
  if (!(omega > 0.0)) {
    throw Error(Errc::NonPositiveOmega, "omega must be > 0");
  }
  if (omega0 < 0.0) {
    throw Error(Errc::NegativeCoupling, "omega0 must be >= 0");
  }
  if (g < 0.0) {
    throw Error(Errc::NegativeCoupling, "g must be >= 0");
  }
  return ModelParams(omega, omega0, g);
}

/// Matrix size and trust window for a finite section of an infinite Jacobi matrix.
struct Truncation {
  std::size_t n_basis = 0;
  std::size_t m_guard = 0;
  double tol_abs = 0.0;
};

/// Builds a truncation; m_guard defaults to n_basis / 2 because the top of a
/// truncated Jacobi spectrum is polluted by the cut.
inline Truncation make_truncation(std::size_t n_basis, double tol_abs, std::size_t m_guard = 0) {
  if (m_guard == 0) m_guard = n_basis / 2;
  if (n_basis < 2 || m_guard == 0 || m_guard >= n_basis) {
    throw Error(Errc::InvalidTruncation, "require 0 < m_guard < n_basis");
  }
  if (!(tol_abs > 0.0) || !std::isfinite(tol_abs)) {
    throw Error(Errc::InvalidTruncation, "tol_abs must be positive and finite");
  }
  return Truncation{n_basis, m_guard, tol_abs};
}

/// Invariant-subspace Hamiltonian. H1 pairs with projector P1, H2 with P2.
enum class Variant { H1, H2 };

/// Which Jacobi matrix to build: the two Hamiltonians or the shifted oscillator.
enum class MatrixKind { A0, H1, H2 };

constexpr MatrixKind to_matrix_kind(Variant v) noexcept {
  return v == Variant::H1 ? MatrixKind::H1 : MatrixKind::H2;
}

constexpr std::string_view to_string(Variant v) noexcept { return v == Variant::H1 ? "H1" : "H2"; }

constexpr std::string_view to_string(MatrixKind k) noexcept {
  switch (k) {
    case MatrixKind::A0: return "A0";
    case MatrixKind::H1: return "H1";
    case MatrixKind::H2: return "H2";
  }
  return "?";
}

}  // namespace jcspec
