#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "ridecomfort/detector_factory.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/expose.hpp"
#include "ridecomfort/relative_entropy.hpp"
#include "ridecomfort/random.hpp"

using namespace ridecomfort;

TEST(ChiSquare, ClosedFormsForSmallDof) {
  for (double x : {0.1, 1.0, 3.0, 10.0}) {
    EXPECT_NEAR(chi_square_cdf(x, 2.0), 1.0 - std::exp(-x / 2.0), 1e-14);
    EXPECT_NEAR(chi_square_cdf(x, 1.0), std::erf(std::sqrt(x / 2.0)), 1e-14);
  }
  EXPECT_DOUBLE_EQ(chi_square_cdf(0.0, 9.0), 0.0);
}

TEST(RelativeEntropy, SilentUntilSecondFullWindow) {
  RelativeEntropyDetector d({5, 4, 1.0});
  SeededRng rng(1);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(d.step(rng.uniform()), 0.0);
  EXPECT_EQ(d.hypothesis_count(), 1u);
}

TEST(RelativeEntropy, ConstantStreamScoresZero) {
  RelativeEntropyDetector d;
  for (int i = 0; i < 200; ++i) EXPECT_NEAR(d.step(2.5), 0.0, 1e-12);
  EXPECT_EQ(d.hypothesis_count(), 1u);
}

TEST(RelativeEntropy, DistributionShiftIsFlagged) {
  RelativeEntropyDetector d;
  SeededRng rng(3);
  for (int i = 0; i < 600; ++i) d.step(rng.uniform(0.0, 1.0));
  double peak = 0.0;
  for (int i = 0; i < 60; ++i) peak = std::max(peak, d.step(rng.uniform(5.0, 6.0)));
  EXPECT_GT(peak, 0.99);
  EXPECT_GT(d.hypothesis_count(), 1u);
}

TEST(RelativeEntropy, JsonRoundTrip) {
  RelativeEntropyDetector d({20, 5, 1.0});
  SeededRng rng(3);
  for (int i = 0; i < 100; ++i) d.step(rng.normal());
  auto copy = RelativeEntropyDetector::from_json(d.to_json());
  for (int i = 0; i < 100; ++i) {
    const double x = rng.normal() * (i > 50 ? 4.0 : 1.0);
    ASSERT_EQ(d.step(x), copy.step(x));
  }
}

TEST(RelativeEntropy, Validation) {
  EXPECT_THROW(validate(RelativeEntropyConfig{1, 10, 1.0}), ValidationError);
  EXPECT_THROW(validate(RelativeEntropyConfig{10, 1, 1.0}), ValidationError);
  RelativeEntropyDetector d;
  EXPECT_THROW(d.step(INFINITY), ValidationError);
}

TEST(Expose, FirstPointScoresOne) {
  ExposeDetector d;
  EXPECT_EQ(d.step(3.0), 1.0);
  EXPECT_EQ(d.step(3.0), 0.0);
}

TEST(Expose, OutlierScoresHigh) {
  ExposeDetector d;
  SeededRng rng(2);
  for (int i = 0; i < 500; ++i) d.step(rng.normal());
  const double typical = d.step(0.0);
  const double outlier = d.step(8.0);
  EXPECT_LT(typical, 0.5);
  EXPECT_GT(outlier, 0.9);
  EXPECT_GT(outlier, typical);
}

TEST(Expose, NegligibleWeightsArePruned) {
  ExposeDetector d({0.5, 0.5});
  for (int i = 0; i < 200; ++i) d.step(static_cast<double>(i % 7));
  EXPECT_LT(d.support_size(), 60u);
}

TEST(Expose, JsonRoundTrip) {
  ExposeDetector d;
  SeededRng rng(5);
  for (int i = 0; i < 80; ++i) d.step(rng.normal());
  auto copy = ExposeDetector::from_json(d.to_json());
  for (int i = 0; i < 40; ++i) {
    const double x = rng.normal();
    ASSERT_EQ(d.step(x), copy.step(x));
  }
}

TEST(DetectorFactory, NamesAndRestore) {
  EXPECT_EQ(parse_detector_kind("re"), DetectorKind::relative_entropy);
  EXPECT_EQ(parse_detector_kind("relative_entropy"), DetectorKind::relative_entropy);
  EXPECT_EQ(parse_detector_kind("expose"), DetectorKind::expose);
  EXPECT_THROW(parse_detector_kind("knn"), ConfigError);
  DetectorSettings s;
  const ScalarEncoderConfig enc{0.0, 5.0, 50, 11, true};
  for (auto kind : {DetectorKind::htm, DetectorKind::relative_entropy, DetectorKind::expose}) {
    auto d = make_detector(kind, s, enc, 4);
    SeededRng rng(1);
    for (int i = 0; i < 120; ++i) d->step(rng.uniform(0.0, 5.0));
    auto copy = load_detector(d->to_json());
    EXPECT_EQ(copy->kind(), d->kind());
    EXPECT_EQ(copy->steps(), d->steps());
    for (int i = 0; i < 20; ++i) {
      const double x = rng.uniform(0.0, 5.0);
      EXPECT_EQ(copy->step(x), d->step(x));
    }
  }
}

TEST(Bootstrap, ConsumesPrefixOnly) {
  ExposeDetector d;
  const std::vector<double> stream{1, 2, 3, 4, 5};
  const auto r = bootstrap(d, stream, 3);
  EXPECT_TRUE(r.ready);
  EXPECT_EQ(r.consumed, 3u);
  EXPECT_EQ(r.scores.size(), 3u);
  EXPECT_EQ(d.steps(), 3u);
  ExposeDetector e;
  EXPECT_FALSE(bootstrap(e, stream, 5).ready);
}
