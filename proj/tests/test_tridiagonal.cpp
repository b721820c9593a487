#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jcspec/special_functions.hpp"
#include "jcspec/tridiagonal.hpp"

using namespace jcspec;

namespace {

SymTridiagonal random_tridiagonal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  SymTridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  for (auto& x : t.diag) x = d(rng);
  for (auto& x : t.offdiag) x = d(rng);
  return t;
}

}  // namespace

TEST(BuildMatrix, Layout) {
  const auto p = validate_params(1.0, 0.3, 0.5);
  const auto h1 = build_matrix(MatrixKind::H1, p, 4);
  const auto h2 = build_matrix(MatrixKind::H2, p, 4);
  const auto a0 = build_matrix(MatrixKind::A0, p, 4);
  EXPECT_EQ(h1.diag, (std::vector<double>{0.3, 1.6, 2.3, 3.6}));
  EXPECT_EQ(h2.diag, (std::vector<double>{0.6, 1.3, 2.6, 3.3}));
  EXPECT_EQ(a0.diag, (std::vector<double>{0.3, 1.3, 2.3, 3.3}));
  for (const auto* t : {&h1, &h2, &a0}) {
    ASSERT_EQ(t->offdiag.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(t->offdiag[k], 0.5 * std::sqrt(k + 1.0));
  }
  EXPECT_THROW(build_matrix(MatrixKind::H1, p, 1), Error);
}

TEST(Sturm, DiagonalExample) {
  const auto p = validate_params(1.0, 1.0, 0.0);
  const auto h2 = build_matrix(MatrixKind::H2, p, 4);
  EXPECT_EQ(h2.diag, (std::vector<double>{2.0, 2.0, 4.0, 4.0}));
  const auto ev = eigenvalues_sturm(h2, 0, 3);
  ASSERT_EQ(ev.size(), 4u);
  const std::vector<double> ref{2.0, 2.0, 4.0, 4.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-12);
}

TEST(Sturm, ShiftedOscillatorGround) {
  // A0 eigenvalues are omega0 + k omega - g^2/omega.
  const auto p = validate_params(1.0, 0.5, 0.3);
  const auto ev = eigenvalues_sturm(build_matrix(MatrixKind::A0, p, 200), 0, 5);
  EXPECT_NEAR(ev[0], 0.41, 1e-9);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(ev[std::size_t(k)], 0.41 + k, 1e-9);
}

TEST(Sturm, MatchesDenseOracleOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const auto t = random_tridiagonal(rng, n);
    const auto ref = dense_eig_oracle(t).eigenvalues;
    const auto ev = eigenvalues_sturm(t, 0, n - 1, 1e-12);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-10) << trial << " " << i;
  }
}

TEST(Sturm, MatchesDenseOracleOnModelMatrices) {
  for (double g : {0.1, 0.8, 2.5}) {
    const auto p = validate_params(1.0, 0.27, g);
    for (auto kind : {MatrixKind::A0, MatrixKind::H1, MatrixKind::H2}) {
      const auto t = build_matrix(kind, p, 40);
      const auto ref = dense_eig_oracle(t).eigenvalues;
      const auto ev = eigenvalues_sturm(t, 0, 39);
      for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-10 * std::max(1.0, std::abs(ref[i])));
    }
  }
}

TEST(Sturm, CountIsMonotone) {
  std::mt19937_64 rng(3);
  const auto t = random_tridiagonal(rng, 30);
  std::size_t prev = 0;
  for (double x = -30.0; x <= 30.0; x += 0.01) {
    const std::size_t c = sturm_count(t, x);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_EQ(prev, 30u);
}

TEST(Sturm, Errors) {
  const auto p = validate_params(1.0, 0.3, 0.5);
  const auto t = build_matrix(MatrixKind::H1, p, 10);
  EXPECT_THROW(eigenvalues_sturm(t, 3, 2), Error);
  EXPECT_THROW(eigenvalues_sturm(t, 0, 10), Error);
  try {
    eigenvalues_sturm(build_matrix(MatrixKind::H1, validate_params(1.0, 0.3, 0.5), 100), 50, 50, 1e-16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BisectionStall);
  }
}

// Eigenvalues of the leading (N-1) block interlace those of the N block.
TEST(Sturm, CauchyInterlacing) {
  for (double g : {0.2, 1.0, 3.0}) {
    const auto p = validate_params(1.0, 0.25, g);
    for (auto kind : {MatrixKind::H1, MatrixKind::H2}) {
      for (std::size_t n = 3; n <= 30; ++n) {
        const auto big = eigenvalues_sturm(build_matrix(kind, p, n), 0, n - 1);
        const auto small = eigenvalues_sturm(build_matrix(kind, p, n - 1), 0, n - 2);
        for (std::size_t i = 0; i + 1 < n; ++i) {
          EXPECT_LE(big[i], small[i] + 1e-10);
          EXPECT_LE(small[i], big[i + 1] + 1e-10);
        }
      }
    }
  }
}

TEST(DenseOracle, TwoByTwo) {
  SymTridiagonal t;
  t.diag = {1.0, 3.0};
  t.offdiag = {2.0};
  const auto r = dense_eig_oracle(t);
  EXPECT_NEAR(r.eigenvalues[0], 2.0 - std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 2.0 + std::sqrt(5.0), 1e-14);
  ASSERT_TRUE(r.eigenvectors.has_value());
}

TEST(DenseOracle, SizeLimit) {
  const auto p = validate_params(1.0, 0.3, 0.5);
  try {
    dense_eig_oracle(build_matrix(MatrixKind::A0, p, 65));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionTooLarge);
  }
}

TEST(DenseOracle, EigenvectorsOrthonormal) {
  std::mt19937_64 rng(5);
  const auto t = random_tridiagonal(rng, 12);
  const auto r = dense_eig_oracle(t);
  const Matrix& v = *r.eigenvectors;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < 12; ++k) dot += v(k, i) * v(k, j);
      EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
    }
    const auto tv = detail::apply(t, v.column(i));
    for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(tv[k], r.eigenvalues[i] * v(k, i), 1e-11);
  }
}

TEST(InverseIteration, DiagonalGivesBasisVector) {
  SymTridiagonal t;
  t.diag = {1.0, 2.0, 3.0, 4.0};
  t.offdiag = {0.0, 0.0, 0.0};
  const auto v = eigenvector_inverse_iteration(t, 3.0);
  EXPECT_NEAR(v[2], 1.0, 1e-14);
  EXPECT_NEAR(v[0], 0.0, 1e-14);
  EXPECT_NEAR(v[1], 0.0, 1e-14);
  EXPECT_NEAR(v[3], 0.0, 1e-14);
}

TEST(InverseIteration, RandomResidual) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_tridiagonal(rng, 10);
    const auto ev = eigenvalues_sturm(t, 0, 9, 1e-13);
    for (double lam : ev) {
      const auto v = eigenvector_inverse_iteration(t, lam);
      const auto tv = detail::apply(t, v);
      double res = 0.0;
      for (std::size_t k = 0; k < 10; ++k) res = std::max(res, std::abs(tv[k] - lam * v[k]));
      EXPECT_LE(res, 1e-8 * t.norm_inf());
      EXPECT_NEAR(detail::norm2(v), 1.0, 1e-12);
    }
  }
}

TEST(InverseIteration, RejectsNonEigenvalue) {
  const auto p = validate_params(1.0, 0.3, 0.5);
  try {
    eigenvector_inverse_iteration(build_matrix(MatrixKind::A0, p, 30), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAnEigenvalue);
  }
}

TEST(InverseIteration, ShiftedOscillatorMatchesOverlapColumns) {
  const auto p = validate_params(1.0, 0.2, 1.1);
  const std::size_t n = 200;
  const auto a0 = build_matrix(MatrixKind::A0, p, n);
  const auto u = overlap_matrix(n, p.g(), p.omega());
  for (int m : {0, 3, 17, 60}) {
    const double lam = p.omega0() + m - p.g() * p.g();
    const auto v = eigenvector_inverse_iteration(a0, lam);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += v[i] * u(i, std::size_t(m));
    EXPECT_NEAR(std::abs(dot), 1.0, 1e-10) << m;
  }
}

TEST(ConvergedSpectrum, ZeroCoupling) {
  const auto p = validate_params(1.0, 1.0, 0.0);
  const auto r = converged_spectrum(Variant::H2, p, 3, 1e-10);
  ASSERT_EQ(r.eigenvalues.size(), 4u);
  const std::vector<double> ref{2.0, 2.0, 4.0, 4.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-10);
}

TEST(ConvergedSpectrum, CertifiesRequestedIndices) {
  const auto p = validate_params(1.0, 0.2, 0.5);
  const auto r = converged_spectrum(Variant::H2, p, 50, 1e-8);
  EXPECT_GE(r.converged_upto, 50u);
  EXPECT_GE(r.truncation.n_basis, 200u);
  EXPECT_TRUE(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
}

TEST(ConvergedSpectrum, ZeroAtomicFrequencyIsShiftedOscillator) {
  const auto p = validate_params(1.3, 0.0, 0.7);
  const auto h1 = converged_spectrum(Variant::H1, p, 30, 1e-10);
  const auto h2 = converged_spectrum(Variant::H2, p, 30, 1e-10);
  for (std::size_t m = 0; m <= 30; ++m) {
    const double ref = m * 1.3 - 0.49 / 1.3;
    EXPECT_NEAR(h1.eigenvalues[m], ref, 1e-9);
    EXPECT_NEAR(h2.eigenvalues[m], h1.eigenvalues[m], 1e-10);
  }
}

TEST(ConvergedSpectrum, ZeroCouplingUnionIsUncoupledLadder) {
  const auto p = validate_params(1.0, 0.35, 0.0);
  const auto h1 = converged_spectrum(Variant::H1, p, 19, 1e-10);
  const auto h2 = converged_spectrum(Variant::H2, p, 19, 1e-10);
  std::vector<double> both = h1.eigenvalues;
  both.insert(both.end(), h2.eigenvalues.begin(), h2.eigenvalues.end());
  std::sort(both.begin(), both.end());
  std::vector<double> ref;
  for (int k = 0; k < 40; ++k) {
    ref.push_back(0.35 + k);
    ref.push_back(0.7 + k);
  }
  std::sort(ref.begin(), ref.end());
  for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(both[i], ref[i], 1e-10);
}

TEST(ConvergedSpectrum, CapExceeded) {
  const auto p = validate_params(1.0, 0.2, 0.5);
  SpectrumOptions opts;
  opts.max_n = 100;
  try {
    converged_spectrum(Variant::H1, p, 40, 1e-10, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoConvergence);
  }
  EXPECT_THROW(converged_spectrum(Variant::H1, p, 4, 0.0), Error);
}
