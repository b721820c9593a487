#pragma once

// Large-m eigenvalue asymptotic, the resonant RWA doublets and level splittings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "jcspec/error.hpp"
#include "jcspec/model.hpp"
#include "jcspec/perturbation.hpp"
#include "jcspec/tridiagonal.hpp"

namespace jcspec {

/// m omega + 3 omega0 / 2 - g^2 / omega (the o(1) remainder dropped).
inline double asymptotic_eigenvalue(int m, const ModelParams& p) {
  return m * p.omega() + 1.5 * p.omega0() - p.g() * p.g() / p.omega();
}

inline bool is_resonant(const ModelParams& p) noexcept { return std::abs(p.omega() - p.omega0()) <= 1e-12; }

/// Resonant rotating-wave doublet omega (2m + 2) -/+ g sqrt(2m + 1), ascending.
inline std::pair<double, double> rwa_eigenvalues(int m, const ModelParams& p) {
  if (!is_resonant(p)) throw Error(Errc::NotResonant, "RWA doublets are only provided for omega == omega0");
  if (m < 0) throw Error(Errc::IndexOutOfRange, "m must be >= 0");
  const double center = p.omega() * (2.0 * m + 2.0);
  const double half = p.g() * std::sqrt(2.0 * m + 1.0);
  return {center - half, center + half};
}

struct SplittingRow {
  int m = 0;
  std::size_t lo_index = 0;
  std::size_t hi_index = 0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double delta = 0.0;
  std::optional<double> rwa_delta;  ///< 2 g sqrt(2m+1); resonant H2 only
};

struct SplittingTable {
  Variant variant = Variant::H2;
  std::vector<SplittingRow> rows;
};

/// Delta(1)_m = lambda_{2m+2} - lambda_{2m+1} (H1), Delta(2)_m = lambda_{2m+1} - lambda_{2m} (H2)
/// from certified exact eigenvalues, m = 0..m_max.
inline SplittingTable splitting_table(Variant v, const ModelParams& p, int m_max, double tol_abs = 1e-10,
                                      SpectrumOptions opts = {}) {
  if (m_max < 0) throw Error(Errc::IndexOutOfRange, "m_max must be >= 0");
  const std::size_t top = v == Variant::H1 ? std::size_t(2 * m_max + 2) : std::size_t(2 * m_max + 1);
  const SpectralResult spec = converged_spectrum(v, p, top, tol_abs, opts);
  SplittingTable out;
  out.variant = v;
  const bool rwa = v == Variant::H2 && is_resonant(p);
  for (int m = 0; m <= m_max; ++m) {
    SplittingRow row;
    row.m = m;
    row.lo_index = v == Variant::H1 ? std::size_t(2 * m + 1) : std::size_t(2 * m);
    row.hi_index = row.lo_index + 1;
    row.lambda_lo = spec.eigenvalues[row.lo_index];
    row.lambda_hi = spec.eigenvalues[row.hi_index];
    row.delta = row.lambda_hi - row.lambda_lo;
    if (rwa) {
      const auto [lo, hi] = rwa_eigenvalues(m, p);
      row.rwa_delta = hi - lo;
    }
    out.rows.push_back(row);
  }
  return out;
}

struct ConvergenceRow {
  int m = 0;
  double exact = 0.0;
  std::vector<double> partial_sums;  ///< orders 0..k_max
  double remainder_bound = std::numeric_limits<double>::quiet_NaN();  ///< at n = k_max, when defined
  double asymptotic = 0.0;
  double residual_series = 0.0;      ///< |exact - partial_sums[k_max]|
  double residual_asymptotic = 0.0;  ///< |exact - asymptotic|
};

/// Exact (certified) eigenvalue, series partial sums, remainder bound and the
/// large-m asymptotic for each m in m_list.
inline std::vector<ConvergenceRow> convergence_table(Variant v, const ModelParams& p, const std::vector<int>& m_list,
                                                     int k_max, double tol_abs = 1e-10, SpectrumOptions opts = {}) {
  if (m_list.empty()) return {};
  for (int m : m_list) {
    if (m < 0) throw Error(Errc::IndexOutOfRange, "m must be >= 0");
  }
  const int top = *std::max_element(m_list.begin(), m_list.end());
  const SpectralResult spec = converged_spectrum(v, p, std::size_t(top), tol_abs, opts);
  std::vector<ConvergenceRow> rows;
  for (int m : m_list) {
    const SeriesReport rep = series_report(v, m, p, k_max);
    ConvergenceRow row;
    row.m = m;
    row.exact = spec.eigenvalues[std::size_t(m)];
    row.partial_sums = rep.partial_sums;
    row.remainder_bound = rep.remainder_bounds.back();
    row.asymptotic = asymptotic_eigenvalue(m, p);
    row.residual_series = std::abs(row.exact - rep.partial_sums.back());
    row.residual_asymptotic = std::abs(row.exact - row.asymptotic);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace jcspec
