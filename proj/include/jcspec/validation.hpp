#pragma once

// Invariant suite behind the `validate` command: each check reports the
// measured value, its threshold and whether it passed.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jcspec/perturbation.hpp"
#include "jcspec/projectors.hpp"
#include "jcspec/special_functions.hpp"
#include "jcspec/tridiagonal.hpp"

namespace jcspec {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

namespace detail {

inline CheckResult at_most(std::string name, double value, double threshold) {
  return CheckResult{std::move(name), value, threshold, std::isfinite(value) && value <= threshold};
}

inline double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_suite(const ModelParams& p) {
  std::vector<CheckResult> out;
  const double ratio = p.coupling_ratio();

  {
    double worst = 0.0;
    for (auto kind : {MatrixKind::A0, MatrixKind::H1, MatrixKind::H2}) {
      const auto t = build_matrix(kind, p, 12);
      const auto ref = dense_eig_oracle(t).eigenvalues;
      const auto ev = eigenvalues_sturm(t, 0, 11);
      for (std::size_t i = 0; i < 12; ++i) worst = std::max(worst, std::abs(ev[i] - ref[i]));
    }
    out.push_back(detail::at_most("sturm_vs_dense_oracle", worst, 1e-10));
  }
  {
    const std::size_t n = std::max<std::size_t>(200, 4 * std::size_t(default_half_width(100, p)));
    out.push_back(detail::at_most("overlap_orthogonality", overlap_matrix(n, p.g(), p.omega()).orthogonality_defect(), 1e-8));
  }
  {
    double worst = 0.0;
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n)
        worst = std::max(worst, std::abs(displaced_overlap(m, n, p.g(), p.omega()) -
                                         displaced_overlap_contour(m, n, p.g(), p.omega()).value));
    out.push_back(detail::at_most("overlap_vs_contour", worst, 1e-9));
  }
  {
    double worst = 0.0;
    for (int k = 0; k <= 40; ++k)
      for (int m = 0; m <= 40; ++m)
        worst = std::max(worst, std::abs(projector_element(Projector::P1, k, m, p) +
                                         projector_element(Projector::P2, k, m, p) - (k == m ? 1.0 : 0.0)));
    out.push_back(detail::at_most("projector_complementarity", worst, 1e-15));
  }
  {
    double worst = 0.0;
    for (auto proj : {Projector::P1, Projector::P2})
      for (int k = 0; k <= 40; k += 5)
        for (int m = 0; m <= 40; m += 5)
          worst = std::max(worst, std::abs(projector_direct_sum(proj, k, m, p) - projector_element(proj, k, m, p)));
    out.push_back(detail::at_most("projector_vs_parity_sum", worst, 1e-9));
  }
  {
    const std::size_t window = 100;
    const std::size_t n = std::max<std::size_t>(400, 4 * (window + std::size_t(default_half_width(int(window), p))));
    out.push_back(detail::at_most("idempotency_P1", idempotency_defect(Projector::P1, p, n, window), 1e-7));
    out.push_back(detail::at_most("idempotency_P2", idempotency_defect(Projector::P2, p, n, window), 1e-7));
    out.push_back(detail::at_most("bu_involution", bu_identity_defect(p, n, window), 1e-8));
  }
  {
    double worst = 0.0;
    if (p.omega0() > 0.0 && ratio > 0.0) {
      for (Variant v : {Variant::H1, Variant::H2}) {
        for (int m : {0, 3, 10, 25}) {
          KatoEngine e(v, m, p);
          worst = std::max(worst, std::abs(e.correction(1) - lambda1(v, m, p)));
          worst = std::max(worst, std::abs(e.correction(2) - lambda2(v, m, p)));
          worst = std::max(worst, std::abs(e.correction(3) - lambda3(v, m, p)));
        }
      }
    }
    out.push_back(detail::at_most("engine_vs_closed_forms", worst, 1e-9));
  }
  {
    double worst = -1.0;
    for (int m : {0, 25, 50, 100, 200, 400}) {
      const auto h = hardy_diagnostics(m, p);
      worst = std::max(worst, h.row_abs_sum - (1.0 - h.diag_overlap * h.diag_overlap));
    }
    out.push_back(detail::at_most("hardy_row_sums", worst, 1e-9));
  }
  {
    double worst = 0.0;
    if (p.omega0() > 0.0) {
      const auto half = validate_params(p.omega(), 0.5 * p.omega0(), p.g());
      const auto twice = validate_params(p.omega(), 2.0 * p.omega0(), p.g());
      KatoEngine base(Variant::H2, 25, p), lo(Variant::H2, 25, half), hi(Variant::H2, 25, twice);
      for (int k = 1; k <= 4; ++k) {
        const double x = base.correction(k);
        worst = std::max(worst, detail::relative_gap(hi.correction(k), std::pow(2.0, k) * x));
        worst = std::max(worst, detail::relative_gap(lo.correction(k), std::pow(0.5, k) * x));
      }
    }
    out.push_back(detail::at_most("omega0_scaling", worst, 1e-6));
  }
  return out;
}

}  // namespace jcspec
