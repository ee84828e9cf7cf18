#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace vqrtest;
namespace st = vqr::stats;

namespace {

// Covariance over product of standard deviations, accumulated in one pass
// with long double sums (a different formula from the library's).
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const long double n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double cov = sxy / n - (sx / n) * (sy / n);
  const long double vx = sxx / n - (sx / n) * (sx / n);
  const long double vy = syy / n - (sy / n) * (sy / n);
  return static_cast<double>(cov / std::sqrt(vx * vy));
}

// Ranks by counting: 1 + #smaller + (#equal - 1) / 2.
std::vector<double> ranks_by_counting(const std::vector<double>& x) {
  std::vector<double> r;
  for (double v : x) {
    double less = 0, equal = 0;
    for (double w : x) {
      less += w < v;
      equal += w == v;
    }
    r.push_back(1 + less + (equal - 1) / 2);
  }
  return r;
}

}  // namespace

TEST(Pearson, Basics) {
  const std::vector<double> x{1, 2, 3, 4};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  EXPECT_DOUBLE_EQ(*st::pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(*st::pearson(x, neg), -1.0);
  const std::vector<double> y{1, 2, 3, 10};
  EXPECT_NEAR(*st::pearson(x, y), pearson_oracle(x, y), 1e-12);
  // numpy.corrcoef
  EXPECT_NEAR(*st::pearson(x, y), 0.8854377448471463, 1e-12);
  const std::vector<double> flat{2, 2, 2, 2};
  EXPECT_FALSE(st::pearson(x, flat));
  EXPECT_THROW(st::pearson(x, std::vector<double>{1, 2}), Error);
}

TEST(Spearman, Basics) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> cubed, rev;
  for (double v : x) {
    cubed.push_back(v * v * v);
    rev.push_back(10 - v);
  }
  EXPECT_DOUBLE_EQ(*st::spearman(x, cubed), 1.0);
  EXPECT_DOUBLE_EQ(*st::spearman(x, rev), -1.0);
}

TEST(Spearman, TiesUseMidranks) {
  const std::vector<double> x{1, 1, 2}, y{1, 2, 3};
  EXPECT_EQ(st::midranks(x), (std::vector<double>{1.5, 1.5, 3}));
  // pearson of (1.5, 1.5, 3) and (1, 2, 3) = 0.8660254037844387
  EXPECT_NEAR(*st::spearman(x, y), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(Stats, SymmetryAndInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  std::vector<double> x(300), y(300), ax(300), tx(300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = z(rng);
    y[i] = x[i] + z(rng);
    ax[i] = 3.0 * x[i] + 7.0;
    tx[i] = std::exp(x[i]);
  }
  EXPECT_NEAR(*st::pearson(x, y), *st::pearson(y, x), 1e-15);
  EXPECT_NEAR(*st::spearman(x, y), *st::spearman(y, x), 1e-15);
  EXPECT_NEAR(*st::pearson(x, y), *st::pearson(ax, y), 1e-12);
  EXPECT_NEAR(*st::spearman(x, y), *st::spearman(tx, y), 1e-12);
}

TEST(Stats, RandomAgainstOracles) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<double> x(1000), y(1000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::round(u(rng));  // rounding forces ties
    y[i] = std::clamp(x[i] + u(rng) / 3.0 - 15.0, 0.0, 100.0);
  }
  EXPECT_NEAR(*st::pearson(x, y), pearson_oracle(x, y), 1e-9);
  EXPECT_NEAR(*st::spearman(x, y), pearson_oracle(ranks_by_counting(x), ranks_by_counting(y)), 1e-9);
}

TEST(DiffStats, IdenticalInputs) {
  const std::vector<double> x{10, 20, 30, 40, 50};
  auto s = st::diff_stats(x, x);
  EXPECT_EQ(s.mean_abs_diff, 0.0);
  EXPECT_EQ(s.median_abs_diff, 0.0);
  EXPECT_EQ(s.mode_bucket, 0);
  EXPECT_EQ(s.mode_share, 1.0);
  EXPECT_EQ(*s.std_dev, 0.0);
  EXPECT_FALSE(s.kurtosis);
  EXPECT_FALSE(s.skewness);
  EXPECT_EQ(s.min, 0.0);
  EXPECT_EQ(s.max, 0.0);
}

TEST(DiffStats, ConstantDifference) {
  const std::vector<double> p{15, 30, 45, 100}, b{0, 15, 60, 85};
  auto s = st::diff_stats(p, b);
  EXPECT_EQ(st::bucket_label(s.mode_bucket), "10-20");
  EXPECT_EQ(s.mode_share, 1.0);
  EXPECT_EQ(*s.std_dev, 0.0);
  EXPECT_EQ(s.mean_abs_diff, 15.0);
}

TEST(DiffStats, Buckets) {
  EXPECT_EQ(st::bucket_of(0), 0);
  EXPECT_EQ(st::bucket_of(9.999), 0);
  EXPECT_EQ(st::bucket_of(10), 1);
  EXPECT_EQ(st::bucket_of(99.9), 9);
  EXPECT_EQ(st::bucket_of(100), 9);
  // tie between buckets resolves to the lower one
  auto s = st::diff_stats(std::vector<double>{0, 0, 50, 50}, std::vector<double>{5, 5, 0, 100});
  EXPECT_EQ(s.mode_bucket, 0);
  EXPECT_EQ(s.mode_share, 0.5);
}

TEST(DiffStats, HandComputedSample) {
  // |d| = 1, 2, 3, 4, 10
  const std::vector<double> p{1, 2, 3, 4, 10}, b{0, 0, 0, 0, 0};
  auto s = st::diff_stats(p, b);
  EXPECT_DOUBLE_EQ(s.mean_abs_diff, 4.0);
  EXPECT_DOUBLE_EQ(s.median_abs_diff, 3.0);
  EXPECT_DOUBLE_EQ(*s.std_dev, std::sqrt(12.5));
  // scipy.stats.skew / kurtosis with bias=False
  EXPECT_NEAR(*s.skewness, 1.6970562748477143, 1e-12);
  EXPECT_NEAR(*s.kurtosis, 3.152, 1e-12);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 10.0);
  EXPECT_EQ(st::bucket_label(s.mode_bucket), "0-10");
  EXPECT_DOUBLE_EQ(s.mode_share, 0.8);
}

TEST(DiffStats, SmallSamples) {
  auto one = st::diff_stats(std::vector<double>{5}, std::vector<double>{1});
  EXPECT_FALSE(one.pearson);
  EXPECT_FALSE(one.std_dev);
  auto three = st::diff_stats(std::vector<double>{1, 2, 7}, std::vector<double>{0, 0, 0});
  EXPECT_TRUE(three.std_dev);
  EXPECT_FALSE(three.skewness);
  EXPECT_THROW(st::diff_stats(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST(Shares, LargestRemainder) {
  auto t = st::make_shares(1, 1, 1);
  EXPECT_EQ(t.correct_bp + t.over_bp + t.under_bp, 10000);
  EXPECT_EQ(t.correct_bp, 3334);
  EXPECT_EQ(st::format_basis_points(t.correct_bp), "33.34");
  EXPECT_EQ(st::format_basis_points(t.over_bp), "33.33");
  auto z = st::make_shares(0, 0, 0);
  EXPECT_EQ(z.correct_bp + z.over_bp + z.under_bp, 0);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 1000; ++i) {
    auto s = st::make_shares(rng() % 997, rng() % 13, rng() % 50000);
    if (s.total() == 0) continue;
    EXPECT_EQ(s.correct_bp + s.over_bp + s.under_bp, 10000);
  }
  EXPECT_EQ(st::format_basis_points(10000), "100.00");
  EXPECT_EQ(st::format_basis_points(5), "0.05");
}

TEST(Confusion, Degenerate) {
  const std::vector<Letter> a(7, Letter::A), e(7, Letter::E);
  auto same = st::grade_confusion(a, a).shares();
  EXPECT_EQ(same.correct_bp, 10000);
  auto over = st::grade_confusion(a, e).shares();
  EXPECT_EQ(over.over, 7u);
  EXPECT_EQ(over.over_bp, 10000);
  auto under = st::grade_confusion(e, a).shares();
  EXPECT_EQ(under.under_bp, 10000);
}

TEST(Confusion, TenRowHandCount) {
  using L = Letter;
  const std::vector<Letter> pred{L::A, L::B, L::B, L::C, L::E, L::D, L::A, L::C, L::D, L::E};
  const std::vector<Letter> bench{L::A, L::A, L::B, L::E, L::E, L::C, L::B, L::C, L::D, L::D};
  auto m = st::grade_confusion(pred, bench);
  EXPECT_EQ(m.total(), 10u);
  EXPECT_EQ(m.counts[0][0], 1u);
  EXPECT_EQ(m.counts[1][0], 1u);
  EXPECT_EQ(m.counts[1][1], 1u);
  EXPECT_EQ(m.counts[2][4], 1u);
  EXPECT_EQ(m.counts[0][1], 1u);
  auto s = m.shares();
  // correct: rows 1,3,5,8,9; over: 4 (C vs E), 7 (A vs B); under: 2, 6, 10
  EXPECT_EQ(s.correct, 5u);
  EXPECT_EQ(s.over, 2u);
  EXPECT_EQ(s.under, 3u);
  EXPECT_EQ(s.correct_bp, 5000);
  EXPECT_THROW(st::grade_confusion(pred, std::vector<Letter>{L::A}), Error);
}
