#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "csls/errors.hpp"
#include "csls/specfun.hpp"

namespace csls {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(RegIncBeta, Limits) {
  for (double a : {0.5, 2.0, 7.0}) {
    for (double b : {0.5, 1.0, 3.0}) {
      EXPECT_EQ(reg_inc_beta(0.0, a, b), 0.0);
      EXPECT_EQ(reg_inc_beta(1.0, a, b), 1.0);
    }
  }
}

TEST(RegIncBeta, ClosedForms) {
  EXPECT_NEAR(reg_inc_beta(0.5, 1.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(reg_inc_beta(0.25, 0.5, 0.5), 1.0 / 3.0, 1e-12);
  for (double x = 0.01; x < 1.0; x += 0.01) {
    EXPECT_NEAR(reg_inc_beta(x, 0.5, 0.5), 2.0 / kPi * std::asin(std::sqrt(x)), 1e-12);
    EXPECT_NEAR(reg_inc_beta(x, 1.0, 0.5), 1.0 - std::sqrt(1.0 - x), 1e-12);
    EXPECT_NEAR(reg_inc_beta(x, 3.0, 1.0), x * x * x, 1e-12);
    EXPECT_NEAR(reg_inc_beta(x, 1.0, 4.0), 1.0 - std::pow(1.0 - x, 4), 1e-12);
  }
}

TEST(RegIncBeta, ReferenceValues) {
  // scipy.special.betainc.
  EXPECT_NEAR(reg_inc_beta(0.3, 2.5, 7.0), 0.6412224629717214, 1e-12);
  EXPECT_NEAR(reg_inc_beta(0.9, 7.0, 0.5), 0.23277883249845518, 1e-12);
  EXPECT_NEAR(reg_inc_beta(0.001, 0.5, 0.5), 0.020135041633377492, 1e-12);
}

TEST(RegIncBeta, Symmetry) {
  for (double a : {0.5, 1.0, 2.5, 7.0}) {
    for (double b : {0.5, 1.0, 2.5, 7.0}) {
      for (int k = 1; k < 100; ++k) {
        const double x = k / 100.0;
        EXPECT_NEAR(reg_inc_beta(x, a, b), 1.0 - reg_inc_beta(1.0 - x, b, a), 1e-12);
      }
    }
  }
}

TEST(RegIncBeta, RejectsOutOfDomain) {
  EXPECT_THROW(reg_inc_beta(-0.1, 1.0, 1.0), InputError);
  EXPECT_THROW(reg_inc_beta(1.1, 1.0, 1.0), InputError);
  EXPECT_THROW(reg_inc_beta(0.5, 0.0, 1.0), InputError);
  EXPECT_THROW(reg_inc_beta(0.5, 1.0, -2.0), InputError);
  EXPECT_THROW(reg_inc_beta(NAN, 1.0, 1.0), InputError);
}

TEST(InvRegIncBeta, Examples) {
  EXPECT_EQ(inv_reg_inc_beta(0.0, 2.0, 3.0), 0.0);
  EXPECT_EQ(inv_reg_inc_beta(1.0, 2.0, 3.0), 1.0);
  for (double y = 0.05; y < 1.0; y += 0.05) EXPECT_NEAR(inv_reg_inc_beta(y, 1.0, 1.0), y, 1e-12);
  EXPECT_NEAR(inv_reg_inc_beta(1.0 / 3.0, 0.5, 0.5), 0.25, 1e-10);
  EXPECT_THROW(inv_reg_inc_beta(1.5, 1.0, 1.0), InputError);
}

TEST(InvRegIncBeta, RoundTripGrid) {
  for (double a : {0.5, 1.0, 2.5, 7.0}) {
    for (double b : {0.5, 1.0, 2.5, 7.0}) {
      double prev = 0.0;
      for (int k = 1; k <= 99; ++k) {
        const double x = k / 100.0;
        const double y = reg_inc_beta(x, a, b);
        const double back = inv_reg_inc_beta(y, a, b);
        // Where y sits within a few ulps of 1, neighbouring x share the same
        // double y and x is only recoverable to ulp(y) / density(x).
        const double density =
            std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - std::log(std::beta(a, b)));
        const double floor = 2.0 * (std::nextafter(y, 2.0) - y) / density;
        EXPECT_NEAR(back, x, std::max(1e-8, floor)) << "a=" << a << " b=" << b << " x=" << x;
        EXPECT_LE(std::abs(reg_inc_beta(back, a, b) - y), 1e-10);
        EXPECT_GE(back, prev);
        prev = back;
      }
    }
  }
}

TEST(CapDelta, Examples) {
  EXPECT_EQ(cap_delta(0.0, 2), 1.0);
  EXPECT_EQ(cap_delta(0.0, 5), 1.0);
  EXPECT_NEAR(cap_delta(0.25, 2), std::sqrt(2.0) / 2.0, 1e-9);
  EXPECT_NEAR(cap_delta(0.25, 3), 0.5, 1e-9);
}

TEST(CapDelta, TwoDimensionalClosedForm) {
  for (int k = 0; k <= 500; ++k) {
    const double eps = 0.5 * k / 500.0;
    EXPECT_NEAR(cap_delta(eps, 2), std::cos(kPi * eps), 1e-9) << eps;
  }
}

TEST(CapDelta, ThreeDimensionalClosedForm) {
  // On S^2 the cap measure is (1 - delta) / 2.
  for (int k = 0; k <= 100; ++k) {
    const double eps = 0.5 * k / 100.0;
    EXPECT_NEAR(cap_delta(eps, 3), 1.0 - 2.0 * eps, 1e-9);
  }
}

TEST(CapChord, Examples) {
  EXPECT_EQ(cap_chord(0.0, 2), 0.0);
  EXPECT_NEAR(cap_chord(0.25, 2), std::sqrt(2.0 - std::sqrt(2.0)), 1e-9);
  const CapGeometry g = cap_geometry(0.5, 2);
  EXPECT_TRUE(g.degenerate);
  EXPECT_EQ(g.delta, 0.0);
  EXPECT_DOUBLE_EQ(g.d, std::sqrt(2.0));
  EXPECT_TRUE(cap_geometry(0.9, 4).degenerate);
  EXPECT_DOUBLE_EQ(cap_chord(0.9, 4), std::sqrt(2.0));
}

TEST(CapChord, SmallEpsilonHasNoCancellation) {
  // n = 2: d = 2 sin(pi eps / 2).
  for (double eps : {1e-12, 1e-8, 1e-5, 1e-3}) {
    EXPECT_NEAR(cap_chord(eps, 2) / (2.0 * std::sin(kPi * eps / 2.0)), 1.0, 1e-8) << eps;
  }
}

TEST(CapGeometry, MonotoneAndInRange) {
  for (int n : {2, 3, 4, 8}) {
    double prev_delta = 2.0;
    double prev_d = -1.0;
    for (int k = 0; k < 200; ++k) {
      const double eps = 0.5 * k / 200.0;
      const CapGeometry g = cap_geometry(eps, n);
      EXPECT_FALSE(g.degenerate);
      EXPECT_GE(g.delta, 0.0);
      EXPECT_LE(g.delta, 1.0);
      EXPECT_GE(g.d, 0.0);
      EXPECT_LE(g.d, std::sqrt(2.0));
      EXPECT_LT(g.delta, prev_delta) << "n=" << n << " eps=" << eps;
      EXPECT_GT(g.d, prev_d);
      EXPECT_NEAR(g.d * g.d, 2.0 - 2.0 * g.delta, 1e-12);
      prev_delta = g.delta;
      prev_d = g.d;
    }
  }
}

TEST(CapGeometry, RejectsBadInput) {
  EXPECT_THROW(cap_geometry(-1e-3, 2), InputError);
  EXPECT_THROW(cap_geometry(0.1, 1), InputError);
}

}  // namespace
}  // namespace csls
