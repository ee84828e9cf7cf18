#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "vqr/random.hpp"

using vqr::Rng;

TEST(Rng, Deterministic) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.bits(), b.bits());
  // the standard fixes the 10000th output of mt19937_64 seeded with 5489
  Rng r(5489u);
  for (int i = 0; i < 9999; ++i) r.bits();
  EXPECT_EQ(r.bits(), 9981545732273789042ull);
}

TEST(Rng, UniformOpenInterval) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, BelowInRange) {
  Rng r(2);
  std::array<int, 7> hist{};
  for (int i = 0; i < 70000; ++i) ++hist[r.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, Moments) {
  Rng r(3);
  const int n = 200000;
  double s = 0, s2 = 0, ps = 0, bs = 0, big = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    ps += static_cast<double>(r.poisson(4.5));
    big += static_cast<double>(r.poisson(75.0));
    bs += static_cast<double>(r.binomial(20, 0.3));
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
  EXPECT_NEAR(ps / n, 4.5, 0.03);
  EXPECT_NEAR(big / n, 75.0, 0.1);
  EXPECT_NEAR(bs / n, 6.0, 0.03);
  EXPECT_EQ(r.poisson(0.0), 0u);
  EXPECT_EQ(r.binomial(10, 0.0), 0u);
  EXPECT_EQ(r.binomial(10, 1.0), 10u);
}
