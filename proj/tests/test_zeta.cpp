#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "expmoment/zeta.hpp"
#include "oracles.hpp"

namespace em = expmoment;
namespace zt = expmoment::zeta;

TEST(PowerCoefficients, SmallTables) {
  const auto t = zt::power_coefficients(3, 2);
  ASSERT_EQ(t.size(), 9u);
  // (1 + 2^-s + 3^-s)^2
  const std::vector<std::uint64_t> expected{0, 1, 2, 2, 1, 0, 2, 0, 0, 1};
  EXPECT_EQ(t.b, expected);
  const auto one = zt::power_coefficients(5, 1);
  for (std::uint64_t m = 1; m <= 5; ++m) EXPECT_EQ(one[m], 1u);
  EXPECT_EQ(one[6], 0u);
}

TEST(PowerCoefficients, MatchesTupleEnumeration) {
  for (int nu = 1; nu <= 3; ++nu) {
    for (std::uint64_t N : {1u, 2u, 7u, 12u}) {
      const auto t = zt::power_coefficients(N, nu);
      const auto ref = oracle::tuple_products(N, nu);
      std::uint64_t total = 0;
      for (std::uint64_t m = 1; m <= t.size(); ++m) {
        const auto it = ref.find(m);
        EXPECT_EQ(t[m], it == ref.end() ? 0u : it->second) << "N=" << N << " nu=" << nu << " m=" << m;
        total += t[m];
      }
      EXPECT_EQ(total, static_cast<std::uint64_t>(std::pow(N, nu)));
    }
  }
}

TEST(PowerCoefficients, TruncatedHeadIsExact) {
  const auto full = zt::power_coefficients(20, 3);
  const auto head = zt::truncated_power_coefficients(20, 3, 500);
  ASSERT_EQ(head.size(), 500u);
  for (std::uint64_t m = 1; m <= 500; ++m) EXPECT_EQ(head[m], full[m]);
  EXPECT_EQ(zt::truncated_power_coefficients(3, 2, 1000).size(), 9u);
}

TEST(PowerCoefficients, BudgetExceeded) {
  try {
    zt::power_coefficients(1000, 3);
    FAIL();
  } catch (const em::Error& e) {
    EXPECT_EQ(e.kind(), em::ErrorKind::BudgetExceeded);
  }
}

TEST(Divisors, Examples) {
  const auto d2 = zt::divisor_table(100, 2);
  EXPECT_EQ(d2[6], 4u);
  EXPECT_EQ(d2[1], 1u);
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 97u}) EXPECT_EQ(d2[p], 2u);
  EXPECT_EQ(d2[64], 7u);
  for (int nu = 1; nu <= 4; ++nu) EXPECT_EQ(zt::divisor_table(10, nu)[1], 1u);
  const auto d3 = zt::divisor_table(200, 3);
  for (std::uint64_t m = 1; m <= 200; ++m) EXPECT_EQ(d3[m], oracle::ordered_factorizations(m, 3)) << m;
}

TEST(Divisors, Multiplicative) {
  const auto d = zt::divisor_table(3000, 3);
  for (std::uint64_t m = 1; m <= 50; ++m)
    for (std::uint64_t n = 1; n <= 50; ++n)
      if (std::gcd(m, n) == 1) EXPECT_EQ(d[m * n], d[m] * d[n]);
}

TEST(Divisors, HeadOfPowerTableIsDivisorFunction) {
  for (int nu = 1; nu <= 3; ++nu) {
    const std::uint64_t N = nu == 3 ? 400 : 1000;
    const auto b = zt::truncated_power_coefficients(N, nu, N);
    const auto d = zt::divisor_table(N, nu);
    for (std::uint64_t m = 1; m <= N; ++m) ASSERT_EQ(b[m], d[m]) << nu << " " << m;
  }
}

TEST(DivisorSum, ExamplesAndMonotone) {
  EXPECT_NEAR(zt::divisor_sum(6, 2), 10.05, 1e-14);
  EXPECT_NEAR(zt::divisor_sum(10, 1), 2.92896825396825396825396825397, 1e-15);
  const auto table = zt::divisor_table(2000, 2);
  double prev = 0;
  for (std::uint64_t x = 1; x <= 2000; x += 37) {
    const double s = zt::divisor_sum(table, x);
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(GrowthFit, SlopeIncreasesTowardTarget) {
  const auto fit = zt::divisor_sum_growth_fit(1, 10, 100000);
  EXPECT_EQ(fit.target, 1.0);
  EXPECT_NEAR(fit.slope, 1.0, 0.25);
  const auto fit2 = zt::divisor_sum_growth_fit(2, 1000, 100000);
  EXPECT_EQ(fit2.target, 4.0);
  EXPECT_GT(fit2.slope, 2.5);
  EXPECT_LT(fit2.slope, 4.6);
  EXPECT_THROW(zt::divisor_sum_growth_fit(2, 100, 50), em::Error);
}

TEST(ZetaInstance, Shape) {
  const auto inst = zt::zeta_instance(4);
  EXPECT_EQ(inst.amplitude(0), 1.0);
  EXPECT_EQ(inst.frequency(0), 0.0);
  EXPECT_EQ(inst.amplitude(3), 0.5);
  EXPECT_NEAR(inst.frequency(3), -std::log(4.0), 1e-16);
}

TEST(ZetaMomentBound, SingleTerm) {
  const auto r = zt::zeta_moment_lower_bound(1, 2, 10.0);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.lhs, 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(r.rhs, 1.0, 1e-14);
}

TEST(ZetaMomentBound, HarmonicCaseMatchesClosedForm) {
  const auto r = zt::zeta_moment_lower_bound(10, 1, 1000.0);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.lhs, 2.92896825396825396825396825397 / 3, 1e-15);
  EXPECT_NEAR(r.rhs, 2.92439102124983953993907414836, 1e-11);
  EXPECT_EQ(*r.detail("sum_b2_over_m_head"), *r.detail("divisor_sum"));
}

TEST(ZetaMomentBound, SquareOfFiftyTerms) {
  const auto r = zt::zeta_moment_lower_bound(50, 2, 1e4);
  EXPECT_TRUE(r.passed);
  EXPECT_GE(*r.detail("sum_b2_over_m_full"), *r.detail("sum_b2_over_m_head"));
}

TEST(ZetaMomentBound, BudgetExceeded) {
  EXPECT_THROW(zt::zeta_moment_lower_bound(100, 5, 10.0), em::Error);
}

TEST(Csv, Rows) {
  std::ostringstream out;
  zt::write_csv(zt::power_coefficients(2, 2).b, out);
  EXPECT_EQ(out.str(), "m,value\n1,1\n2,2\n3,0\n4,1\n");
}
