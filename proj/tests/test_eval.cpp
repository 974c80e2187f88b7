#include <gtest/gtest.h>

#include <numbers>

#include "expmoment/detail/random.hpp"
#include "expmoment/eval.hpp"
#include "oracles.hpp"

namespace em = expmoment;
using std::numbers::pi;

TEST(EvalSum, Examples) {
  const em::Instance constant({1.0}, {0.0});
  for (double t : {-7.0, 0.0, 3.3, 1e6}) {
    const auto s = em::eval_sum(constant, t);
    EXPECT_EQ(s.real(), 1.0);
    EXPECT_EQ(s.imag(), 0.0);
  }
  const em::Instance two({1.0, 1.0}, {0.0, 1.0});
  const auto at_pi = em::eval_sum(two, pi);
  EXPECT_NEAR(at_pi.real(), 0.0, 1e-15);
  EXPECT_NEAR(at_pi.imag(), 0.0, 1e-15);
  const auto quarter = em::eval_sum(two, pi / 2);
  EXPECT_NEAR(quarter.real(), 1.0, 1e-15);
  EXPECT_NEAR(quarter.imag(), 1.0, 1e-15);
}

TEST(EvalPower, Examples) {
  const em::Instance two({1.0, 1.0}, {0.0, 1.0});
  EXPECT_EQ(em::eval_power(two, 0.0, em::MomentOrder(2)), 16.0);
  EXPECT_NEAR(em::eval_power(two, pi, em::MomentOrder(3)), 0.0, 1e-90);
  // |2 + e^{3.5i}|^2 = 5 + 4 cos 3.5, 30-digit reference value.
  const em::Instance off({2.0, 1.0}, {0.0, 5.0});
  EXPECT_NEAR(em::eval_power(off, 0.7, em::MomentOrder(1)), 1.25417325083681464920536949331, 1e-14);
}

TEST(EvalPower, ComplexCoefficients) {
  const em::Instance a({1.0, 1.0}, {0.0, 1.0});
  const em::ComplexCoefficients c({{0.0, 1.0}, {-1.0, 0.0}}, a);
  // i - e^{it} at t = pi/2: i - i = 0.
  EXPECT_NEAR(em::eval_power(c, pi / 2, em::MomentOrder(1)), 0.0, 1e-30);
  EXPECT_NEAR(em::eval_power(c, 0.0, em::MomentOrder(1)), 2.0, 1e-15);
}

TEST(EvalPower, OverflowGuard) {
  const em::Instance big({1e100, 1e100}, {0.0, 1.0});
  EXPECT_NO_THROW(em::eval_power(big, 0.0, em::MomentOrder(1)));
  try {
    em::eval_power(big, 0.0, em::MomentOrder(2));
    FAIL();
  } catch (const em::Error& e) {
    EXPECT_EQ(e.kind(), em::ErrorKind::Overflow);
  }
}

TEST(EvalBatch, Examples) {
  const em::Instance three({1.0, 1.0, 1.0}, {0.3, -2.0, 7.0});
  EXPECT_TRUE(em::eval_batch(three, em::EvaluationGrid{}, em::MomentOrder(1)).empty());
  const auto one = em::eval_batch(three, em::EvaluationGrid({0.0}), em::MomentOrder(1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], 9.0);
}

TEST(EvalBatch, MatchesPointwiseBitForBit) {
  em::detail::CounterRng rng(11);
  std::vector<double> a(7), phi(7);
  for (auto& x : a) x = rng.uniform();
  for (auto& x : phi) x = rng.uniform(-20, 20);
  const em::Instance inst(a, phi);
  std::vector<double> pts(5000);
  double t = -300.0;
  for (auto& p : pts) p = (t += rng.uniform(0.01, 0.2));
  const em::EvaluationGrid grid(pts);
  const auto batch = em::eval_batch(inst, grid, em::MomentOrder(3));
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(batch[i], em::eval_power(inst, pts[i], em::MomentOrder(3)));
}

TEST(EvaluationGrid, RejectsUnsorted) {
  EXPECT_THROW(em::EvaluationGrid({0.0, 0.0}), em::Error);
  EXPECT_THROW(em::EvaluationGrid({1.0, 0.0}), em::Error);
  EXPECT_THROW(em::EvaluationGrid({NAN}), em::Error);
}

class EvalProperties : public ::testing::TestWithParam<int> {};

TEST_P(EvalProperties, TriangleConjugateAndShift) {
  em::detail::CounterRng rng(1234, static_cast<std::uint64_t>(GetParam()));
  const auto N = static_cast<std::size_t>(rng.integer(1, 10));
  std::vector<double> a(N), phi(N), shifted(N);
  for (auto& x : a) x = rng.uniform();
  for (auto& x : phi) x = rng.uniform(-10, 10);
  const double delta = rng.uniform(-5, 5);
  for (std::size_t n = 0; n < N; ++n) shifted[n] = phi[n] + delta;
  const em::Instance inst(a, phi), moved(a, shifted);
  const em::MomentOrder q(static_cast<int>(rng.integer(1, 4)));
  double l1 = 0.0;
  for (double x : a) l1 += x;
  std::vector<std::complex<double>> c(a.begin(), a.end());
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(-100, 100);
    const auto s = em::eval_sum(inst, t);
    EXPECT_LE(std::abs(s), l1 * (1 + 1e-15));
    const auto m = em::eval_sum(inst, -t);
    EXPECT_NEAR(m.real(), s.real(), 1e-13);
    EXPECT_NEAR(m.imag(), -s.imag(), 1e-13);
    const double p = em::eval_power(inst, t, q);
    EXPECT_NEAR(em::eval_power(moved, t, q), p, 1e-10 * p + 1e-13 * std::pow(l1, 2 * q.value()));
    EXPECT_NEAR(std::abs(s), oracle::modulus(c, phi, t), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Random, EvalProperties, ::testing::Range(0, 40));
