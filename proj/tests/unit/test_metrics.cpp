#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ridecomfort/error.hpp"
#include "ridecomfort/kendall.hpp"
#include "ridecomfort/roc.hpp"
#include "ridecomfort/sobol.hpp"

using namespace ridecomfort;

namespace {

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        den += 1.0;
        num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
  }
  return num / den;
}

}  // namespace

TEST(Roc, MatchesPairwiseCount) {
  SeededRng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = 2 + rng.below(30);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(5));  // many ties
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    EXPECT_NEAR(roc_auc(s, y), brute_auc(s, y), 1e-12);
  }
}

TEST(Roc, KnownValues) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(roc_auc(s, y), 0.75);
  const std::vector<double> tied{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(roc_auc(tied, y), 0.5);
}

TEST(Roc, SingleClassIsUndefined) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> y{1, 1};
  EXPECT_THROW(roc_auc(s, y), UndefinedMetricError);
}

TEST(Roc, MulticlassMacroOverPresentLevels) {
  std::vector<IndicatorVector> p;
  std::vector<int> y;
  for (int level : {1, 2, 4, 1, 2, 4}) {
    IndicatorVector v{};
    v.p[level - 1] = 0.9;
    for (int k = 0; k < 5; ++k) {
      if (k != level - 1) v.p[k] = 0.025;
    }
    p.push_back(v);
    y.push_back(level);
  }
  const auto r = multiclass_auc(p, y);
  EXPECT_EQ(r.per_class.size(), 3u);
  EXPECT_DOUBLE_EQ(r.macro, 1.0);
  EXPECT_EQ(r.absent, (std::vector<int>{3, 5}));
  const std::vector<int> one(6, 2);
  EXPECT_THROW(multiclass_auc(p, one), UndefinedMetricError);
}

TEST(Kendall, AgreementAndReversal) {
  EXPECT_DOUBLE_EQ(kendall_w({{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_w({{1, 2, 3, 4}, {4, 3, 2, 1}}), 0.0);
  EXPECT_THROW(kendall_w({{1, 2, 3}}), UndefinedMetricError);
  EXPECT_THROW(kendall_w({{1}, {1}}), UndefinedMetricError);
}

TEST(Kendall, MatchesFormula) {
  SeededRng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.below(4), n = 2 + rng.below(8);
    std::vector<std::vector<double>> r(m, std::vector<double>(n));
    for (auto& row : r) {
      for (auto& v : row) v = rng.normal();
    }
    std::vector<double> sums(n, 0.0);
    for (const auto& row : r) {
      // ranks by counting, no ties with continuous draws
      for (std::size_t j = 0; j < n; ++j) {
        double rank = 1.0;
        for (std::size_t k = 0; k < n; ++k) rank += row[k] < row[j] ? 1.0 : 0.0;
        sums[j] += rank;
      }
    }
    const double mean = m * (n + 1) / 2.0;
    double s = 0.0;
    for (double v : sums) s += (v - mean) * (v - mean);
    const double w = 12.0 * s / (m * m * (std::pow(n, 3) - n));
    EXPECT_NEAR(kendall_w(r), w, 1e-12);
  }
}

TEST(Kendall, MonotoneTransformInvariance) {
  const std::vector<std::vector<double>> a{{0.3, 1.2, -0.5, 2.0}, {1.0, 0.1, 0.2, 3.0}};
  auto b = a;
  for (auto& v : b[0]) v = std::exp(3.0 * v);
  EXPECT_DOUBLE_EQ(kendall_w(a), kendall_w(b));
}

TEST(Kendall, AverageRanks) {
  const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{3.5, 1.0, 3.5, 2.0}));
}

TEST(Sobol, AdditiveLinearModel) {
  // y = x0 + 2 x1 on the unit square: totals 1/5 and 4/5, x2 inert.
  SeededRng rng(3);
  const auto r = sobol_total_order([](std::span<const double> x) { return x[0] + 2.0 * x[1]; },
                                   {{0, 1}, {0, 1}, {0, 1}}, 4096, rng, 50);
  EXPECT_NEAR(r.total[0], 0.2, 0.03);
  EXPECT_NEAR(r.total[1], 0.8, 0.05);
  EXPECT_NEAR(r.total[2], 0.0, 1e-12);
  EXPECT_EQ(r.evaluations, 4096u * 5);
  EXPECT_GT(r.half_width[0], 0.0);
}

TEST(Sobol, Errors) {
  SeededRng rng(3);
  const auto f = [](std::span<const double>) { return 1.0; };
  EXPECT_THROW(sobol_total_order(f, {{0, 1}}, 100, rng), ValidationError);
  EXPECT_THROW(sobol_total_order(f, {{0, 1}}, 256, rng), UndefinedMetricError);
}

TEST(Sobol, SameSeedSameResult) {
  const auto f = [](std::span<const double> x) { return std::sin(x[0]) * x[1]; };
  SeededRng a(9), b(9);
  const std::vector<std::pair<double, double>> ranges{{-3, 3}, {0, 1}};
  EXPECT_EQ(sobol_total_order(f, ranges, 512, a).total, sobol_total_order(f, ranges, 512, b).total);
}
