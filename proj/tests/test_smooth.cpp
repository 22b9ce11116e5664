#include <gtest/gtest.h>

#include <cmath>

#include "gpfab/smooth.hpp"
#include "oracles.hpp"

using namespace gpfab;

namespace {

const PrimeSieve& sieve() {
  static const PrimeSieve s(200'000);
  return s;
}

}  // namespace

TEST(PsiCount, Examples) {
  EXPECT_EQ(psi_count(10, 2, sieve()), 4u);
  EXPECT_EQ(psi_count(100, 100, sieve()), 100u);
  EXPECT_EQ(psi_count(100, 5, sieve()), 34u);
}

TEST(PsiCount, MatchesNaiveFiltering) {
  for (double y : {2.0, 3.0, 5.0, 10.0, 100.0})
    for (u64 x : {1ULL, 2ULL, 17ULL, 100ULL, 999ULL, 4321ULL, 10'000ULL})
      ASSERT_EQ(psi_count(x, y, sieve()), oracle::psi_count(x, y)) << x << " " << y;
}

TEST(PsiCount, EnumerationBeyondTableAgreesWithScan) {
  const PrimeSieve small(1000);
  for (double y : {2.0, 7.0, 50.0, 997.0})
    ASSERT_EQ(psi_count(150'000, y, small), psi_count(150'000, y, sieve())) << y;
  EXPECT_THROW(psi_count(150'000, 5000, small), RangeError);
}

TEST(PsiCount, Monotone) {
  u64 prev_x = 0;
  for (u64 x = 1; x <= 2000; x += 37) {
    const u64 v = psi_count(x, 7, sieve());
    ASSERT_GE(v, prev_x);
    prev_x = v;
    ASSERT_EQ(psi_count(x, static_cast<double>(x) + 2, sieve()), x);
  }
  u64 prev_y = 0;
  for (double y = 2; y <= 200; y += 3) {
    const u64 v = psi_count(5000, y, sieve());
    ASSERT_GE(v, prev_y);
    prev_y = v;
  }
}

TEST(Dickman, Examples) {
  EXPECT_EQ(dickman_rho(0.5), 1.0);
  EXPECT_EQ(dickman_rho(1.0), 1.0);
  EXPECT_NEAR(dickman_rho(2.0), 1.0 - std::log(2.0), 1e-9);
  EXPECT_LE(dickman_rho(3.0), 1.0 / 6.0);
  EXPECT_NEAR(dickman_rho(3.0), oracle::rho_2_3(3.0), 1e-8);
  EXPECT_THROW(dickman_rho(-0.1), InvalidArgument);
  EXPECT_THROW(dickman_rho(20.5), InvalidArgument);
}

TEST(Dickman, AnalyticOnOneTwo) {
  for (int i = 0; i < 100; ++i) {
    const double u = 1.0 + i / 99.0;
    ASSERT_NEAR(dickman_rho(u), 1.0 - std::log(u), 1e-6) << u;
  }
}

TEST(Dickman, QuadratureOnTwoThree) {
  for (int i = 0; i <= 40; ++i) {
    const double u = 2.0 + i / 40.0;
    ASSERT_NEAR(dickman_rho(u), oracle::rho_2_3(u), 1e-8) << u;
  }
}

TEST(Dickman, GridInvariants) {
  const auto& t = default_dickman_table();
  const auto& v = t.values();
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double u = t.grid_point(i);
    ASSERT_GT(v[i], 0.0);
    ASSERT_LE(v[i], v[i - 1]);
    ASSERT_LE(v[i], (1.0 + 1e-9) / std::tgamma(u + 1.0)) << u;
  }
  // rho(u) u^u roughly constant order is not asserted; spot value at 10
  EXPECT_NEAR(dickman_rho(10.0), 2.77017183772596e-11, 1e-15);
}

TEST(Dickman, SatisfiesIntegralEquation) {
  // u rho(u) = int_{u-1}^{u} rho(t) dt at a few points, Simpson on 2000 panels
  for (double u : {2.5, 4.0, 7.3}) {
    const int n = 2000;
    const double h = 1.0 / n;
    double s = dickman_rho(u - 1) + dickman_rho(u);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * dickman_rho(u - 1 + i * h);
    EXPECT_NEAR(u * dickman_rho(u), s * h / 3.0, 1e-7 * dickman_rho(u - 1)) << u;
  }
}

TEST(PsiApprox, Report) {
  const auto r = psi_approx_report(100'000, 100, sieve());
  EXPECT_EQ(r.exact, psi_count(100'000, 100, sieve()));
  EXPECT_NEAR(r.approx, 100'000 * dickman_rho(2.5), 1e-6);
  EXPECT_NEAR(r.residual, (static_cast<double>(r.exact) - r.approx) * std::log(100.0) / 100'000, 1e-12);
  const auto same = psi_approx_report(1000, 1000, sieve());
  EXPECT_EQ(same.exact, 1000u);
  EXPECT_DOUBLE_EQ(same.residual, 0.0);
}
