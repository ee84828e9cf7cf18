#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqr/error.hpp"
#include "vqr/grading.hpp"

namespace vqr::stats {

// 1-based ranks, tied values sharing the mean of their positions.
inline std::vector<double> midranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // positions i..j (0-based) share rank mean((i+1)..(j+1))
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Product-moment correlation; nullopt when either side has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: inputs differ in length");
  if (x.size() < 2) throw Error("pearson: need at least two pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman: inputs differ in length");
  auto rx = midranks(x);
  auto ry = midranks(y);
  return pearson(rx, ry);
}

inline constexpr int kBuckets = 10;

// Width-10 bucket of an absolute difference in [0, 100]; 100 falls in the last bucket.
inline int bucket_of(double d) { return std::clamp(static_cast<int>(std::floor(d / 10.0)), 0, kBuckets - 1); }

inline std::string bucket_label(int b) { return std::to_string(10 * b) + "-" + std::to_string(10 * b + 10); }

// Statistics of |predictor - benchmark| plus the correlation of the pair.
struct DiffStats {
  std::size_t n = 0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  double mean_abs_diff = 0.0;
  double median_abs_diff = 0.0;
  int mode_bucket = 0;  // [10*b, 10*b + 10)
  double mode_share = 0.0;
  std::optional<double> std_dev;   // sample (n - 1)
  std::optional<double> kurtosis;  // sample excess
  std::optional<double> skewness;  // adjusted Fisher-Pearson
  double min = 0.0;
  double max = 0.0;
};

inline DiffStats diff_stats(std::span<const double> predictor, std::span<const double> benchmark) {
  if (predictor.size() != benchmark.size()) throw Error("diff_stats: inputs differ in length");
  if (predictor.empty()) throw Error("diff_stats: no observations");
  DiffStats s;
  s.n = predictor.size();
  if (s.n >= 2) {
    s.pearson = pearson(predictor, benchmark);
    s.spearman = spearman(predictor, benchmark);
  }
  std::vector<double> d(s.n);
  for (std::size_t i = 0; i < s.n; ++i) d[i] = std::fabs(predictor[i] - benchmark[i]);

  const double n = static_cast<double>(s.n);
  double sum = 0.0;
  std::array<std::size_t, kBuckets> counts{};
  for (double v : d) {
    sum += v;
    ++counts[static_cast<std::size_t>(bucket_of(v))];
  }
  s.mean_abs_diff = sum / n;
  auto best = std::max_element(counts.begin(), counts.end());  // first maximum: lowest bucket wins ties
  s.mode_bucket = static_cast<int>(best - counts.begin());
  s.mode_share = static_cast<double>(*best) / n;

  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median_abs_diff =
      s.n % 2 ? sorted[s.n / 2] : 0.5 * (sorted[s.n / 2 - 1] + sorted[s.n / 2]);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : d) {
    const double e = v - s.mean_abs_diff;
    const double e2 = e * e;
    m2 += e2;
    m3 += e2 * e;
    m4 += e2 * e2;
  }
  if (s.n >= 2) s.std_dev = std::sqrt(m2 / (n - 1.0));
  if (s.n >= 4 && m2 > 0.0) {
    const double var = m2 / (n - 1.0);
    const double sd = std::sqrt(var);
    s.skewness = n / ((n - 1.0) * (n - 2.0)) * (m3 / (sd * sd * sd));
    s.kurtosis = n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * (m4 / (var * var)) -
                 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  }
  return s;
}

// Correct / over / under shares in hundredths of a percent, rounded by the
// largest-remainder method so that they always total 10000.
struct ShareTriple {
  std::uint64_t correct = 0;
  std::uint64_t over = 0;
  std::uint64_t under = 0;
  std::int64_t correct_bp = 0;
  std::int64_t over_bp = 0;
  std::int64_t under_bp = 0;

  std::uint64_t total() const { return correct + over + under; }
};

inline ShareTriple make_shares(std::uint64_t correct, std::uint64_t over, std::uint64_t under) {
  ShareTriple t{correct, over, under, 0, 0, 0};
  const std::uint64_t n = t.total();
  if (n == 0) return t;
  if (n > std::numeric_limits<std::uint64_t>::max() / 10000u) throw Error("make_shares: counts too large");
  const std::uint64_t counts[3] = {correct, over, under};
  std::int64_t bp[3];
  std::uint64_t rem[3];
  std::int64_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t scaled = counts[i] * 10000u;
    bp[i] = static_cast<std::int64_t>(scaled / n);
    rem[i] = static_cast<std::uint64_t>(scaled % n);
    assigned += bp[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (std::int64_t left = 10000 - assigned, k = 0; left > 0; --left, ++k) ++bp[order[static_cast<std::size_t>(k)]];
  t.correct_bp = bp[0];
  t.over_bp = bp[1];
  t.under_bp = bp[2];
  return t;
}

// Rows are the predictor's grade, columns the benchmark's, both A..E.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, 5>, 5> counts{};

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& row : counts)
      for (auto c : row) n += c;
    return n;
  }

  // Diagonal: agreement. Above the diagonal (predictor strictly better): over.
  ShareTriple shares() const {
    std::uint64_t correct = 0, over = 0, under = 0;
    for (std::size_t p = 0; p < 5; ++p)
      for (std::size_t b = 0; b < 5; ++b) {
        if (p == b) correct += counts[p][b];
        else if (p < b) over += counts[p][b];
        else under += counts[p][b];
      }
    return make_shares(correct, over, under);
  }
};

inline ConfusionMatrix grade_confusion(std::span<const Letter> predictor, std::span<const Letter> benchmark) {
  if (predictor.size() != benchmark.size()) throw Error("grade_confusion: inputs differ in length");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < predictor.size(); ++i)
    ++m.counts[static_cast<std::size_t>(predictor[i])][static_cast<std::size_t>(benchmark[i])];
  return m;
}

inline std::string format_basis_points(std::int64_t bp) {
  std::string s = std::to_string(bp / 100) + ".";
  const auto frac = bp % 100;
  if (frac < 10) s += "0";
  s += std::to_string(frac);
  return s;
}

}  // namespace vqr::stats
