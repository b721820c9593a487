#include <gtest/gtest.h>

#include <cmath>

#include "jcspec/projectors.hpp"

using namespace jcspec;

TEST(ProjectorElement, ZeroCoupling) {
  const auto p = validate_params(1.0, 0.2, 0.0);
  for (int k = 0; k < 8; ++k) {
    for (int m = 0; m < 8; ++m) {
      const double odd = (k == m && k % 2 == 1) ? 1.0 : 0.0;
      const double even = (k == m && k % 2 == 0) ? 1.0 : 0.0;
      EXPECT_EQ(projector_element(Projector::P1, k, m, p), odd);
      EXPECT_EQ(projector_element(Projector::P2, k, m, p), even);
    }
  }
}

TEST(ProjectorElement, GroundStateValue) {
  const auto p = validate_params(1.0, 0.2, 1.0);
  EXPECT_NEAR(projector_element(Projector::P1, 0, 0, p), 0.5 - 0.5 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(projector_element(Projector::P1, 0, 0, p), 0.432332, 1e-6);
}

TEST(ProjectorElement, ComplementarityIsExact) {
  for (double g : {0.0, 0.3, 1.2, 2.5}) {
    const auto p = validate_params(1.0, 0.2, g);
    for (int k = 0; k <= 40; ++k) {
      for (int m = 0; m <= 40; ++m) {
        const double sum = projector_element(Projector::P1, k, m, p) + projector_element(Projector::P2, k, m, p);
        EXPECT_NEAR(sum, k == m ? 1.0 : 0.0, 2.3e-16) << g << " " << k << " " << m;
      }
    }
  }
}

TEST(ProjectorElement, Symmetric) {
  const auto p = validate_params(1.0, 0.2, 0.9);
  for (int k = 0; k < 30; ++k)
    for (int m = 0; m < 30; ++m)
      EXPECT_NEAR(projector_element(Projector::P2, k, m, p), projector_element(Projector::P2, m, k, p), 1e-15);
}

TEST(ProjectorDirectSum, KnownValues) {
  const auto p = validate_params(1.0, 0.2, 1.0);
  EXPECT_NEAR(projector_direct_sum(Projector::P1, 0, 0, p), 0.5 - 0.5 * std::exp(-2.0), 1e-9);
  const auto q = validate_params(1.0, 0.2, 0.7);
  EXPECT_NEAR(projector_direct_sum(Projector::P1, 3, 5, q), projector_element(Projector::P1, 3, 5, q), 1e-9);
  const auto z = validate_params(1.0, 0.2, 0.0);
  for (int k = 0; k < 6; ++k)
    EXPECT_EQ(projector_direct_sum(Projector::P2, k, k, z), k % 2 == 0 ? 1.0 : 0.0);
}

TEST(ProjectorDirectSum, AgreesWithClosedForm) {
  for (double g : {0.2, 0.7, 1.2}) {
    const auto p = validate_params(1.0, 0.2, g);
    for (auto proj : {Projector::P1, Projector::P2}) {
      for (int k = 0; k <= 40; k += 3) {
        for (int m = 0; m <= 40; m += 4) {
          EXPECT_NEAR(projector_direct_sum(proj, k, m, p), projector_element(proj, k, m, p), 1e-9);
        }
      }
    }
  }
}

TEST(ProjectorDirectSum, ShortSumRejected) {
  const auto p = validate_params(1.0, 0.2, 2.0);
  try {
    projector_direct_sum(Projector::P1, 10, 10, p, 14);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TailNotConverged);
  }
}

TEST(ProjectorMatrix, OperatorForm) {
  // P1 = (E - B U(2g)) / 2 with B = diag((-1)^k)
  const auto p = validate_params(1.0, 0.2, 0.6);
  const auto u = overlap_matrix(30, 2.0 * p.g(), p.omega());
  const auto pm = projector_matrix(Projector::P1, p, 30);
  for (std::size_t k = 0; k < 30; ++k) {
    for (std::size_t m = 0; m < 30; ++m) {
      const double b = k % 2 == 0 ? 1.0 : -1.0;
      EXPECT_NEAR(pm.elements(k, m), 0.5 * ((k == m ? 1.0 : 0.0) - b * u(k, m)), 1e-15);
    }
  }
}

TEST(ProjectorMatrix, Idempotent) {
  for (double g : {0.0, 0.5, 1.0, 1.5}) {
    const auto p = validate_params(1.0, 0.2, g);
    EXPECT_LE(idempotency_defect(Projector::P1, p, 400, 100), 1e-7) << g;
    EXPECT_LE(idempotency_defect(Projector::P2, p, 400, 100), 1e-7) << g;
  }
  EXPECT_THROW(idempotency_defect(Projector::P1, validate_params(1.0, 0.2, 0.5), 100, 60), Error);
}

TEST(BUIdentity, Involution) {
  EXPECT_EQ(bu_identity_defect(validate_params(1.0, 0.2, 0.0), 40, 20), 0.0);
  EXPECT_LE(bu_identity_defect(validate_params(1.0, 0.2, 0.5), 400, 100), 1e-8);
  EXPECT_LE(bu_identity_defect(validate_params(1.0, 0.2, 1.5), 1200, 100), 1e-8);
}

TEST(CertifiedWindow, DroppedMass) {
  const auto p = validate_params(1.0, 0.2, 0.5);
  for (int m : {0, 10, 100, 1000}) {
    const auto w = certified_window(m, p);
    EXPECT_LE(w.dropped_mass, 1e-12);
    EXPECT_EQ(w.indices[w.target_pos], m);
    EXPECT_TRUE(std::is_sorted(w.indices.begin(), w.indices.end()));
  }
  // Low block always present.
  const auto w = certified_window(500, p);
  EXPECT_EQ(w.indices.front(), 0);
  EXPECT_EQ(w.indices[39], 39);
}

TEST(CertifiedWindow, DefaultWidensForStrongCoupling) {
  const auto p = validate_params(1.0, 0.2, 3.0);
  const auto w = certified_window(0, p);
  EXPECT_LE(w.dropped_mass, 1e-12);
  EXPECT_GT(w.indices.back(), default_half_width(0, p));
}

TEST(CertifiedWindow, TooNarrow) {
  const auto p = validate_params(1.0, 0.2, 2.0);
  try {
    certified_window(400, p, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TailNotConverged);
  }
}
