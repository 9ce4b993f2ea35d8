#include <gtest/gtest.h>

#include <cmath>

#include "ridecomfort/error.hpp"
#include "ridecomfort/features.hpp"
#include "ridecomfort/geo.hpp"

using namespace ridecomfort;

namespace {

TripRecord ramp_trip(double duration, double rate_hz, double slope, double speed) {
  TripRecord r;
  r.meta.trip_id = "ramp";
  r.meta.commuter_id = "c";
  r.meta.start_clock = {9, 59};
  for (double t = 0.0; t <= duration + 1e-9; t += 1.0 / rate_hz) {
    const LatLon p = offset_km({22.5, 88.3}, speed * t / 1000.0, 0.0);
    r.samples.push_back({t, slope * t, p.lat, p.lon, speed});
  }
  return r;
}

}  // namespace

TEST(Features, JerkIsLeastSquaresSlope) {
  std::vector<SensorSample> w;
  // a = 2t + 1 with zero-mean perturbation symmetric in t
  const double ts[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  const double e[] = {0.1, -0.2, 0.2, -0.2, 0.1};
  for (int i = 0; i < 5; ++i) w.push_back({ts[i], 2.0 * ts[i] + 1.0 + e[i], 0, 0, 0.0});
  // slope of the perturbation: sum (t - 1) e / sum (t - 1)^2
  const double pert = (-1.0 * 0.1 + -0.5 * -0.2 + 0.5 * -0.2 + 1.0 * 0.1) / 2.5;
  EXPECT_NEAR(jerk(w), 2.0 + pert, 1e-12);
}

TEST(Features, JerkNeedsTwoSamples) {
  std::vector<SensorSample> one{{0.0, 1.0, 0, 0, 0.0}};
  EXPECT_THROW(jerk(one), InsufficientDataError);
}

TEST(Features, SmoothingKeepsLinearSignalsInTheInterior) {
  std::vector<SensorSample> s;
  for (int i = 0; i < 20; ++i) s.push_back({i * 0.5, 3.0 * i, 0, 0, 0.0});
  const auto out = smooth(s, {5});
  ASSERT_EQ(out.size(), s.size());
  for (int i = 2; i < 18; ++i) EXPECT_NEAR(out[i].accel_y, s[i].accel_y, 1e-12);
  EXPECT_NEAR(out[0].accel_y, (0.0 + 3.0 + 6.0) / 3.0, 1e-12);
  const auto same = smooth(s, {1});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(same[i].accel_y, s[i].accel_y);
}

TEST(Features, CongestionCycleThresholdsAreOneAndFiveMinutes) {
  EXPECT_EQ(CongestionTracker::kMediumCycle, 60.0);
  EXPECT_EQ(CongestionTracker::kHighCycle, 300.0);
  EXPECT_EQ(CongestionTracker::level_for_cycle(59.999), 0);
  EXPECT_EQ(CongestionTracker::level_for_cycle(60.0), 1);
  EXPECT_EQ(CongestionTracker::level_for_cycle(299.999), 1);
  EXPECT_EQ(CongestionTracker::level_for_cycle(300.0), 2);
}

TEST(Features, CongestionTrackerMeasuresStopToStop) {
  // Stops start every 120 s: a moving phase of 90 s then 30 s standing.
  CongestionTracker tr;
  int level = -1;
  for (double t = 0.0; t < 500.0; t += 0.5) {
    const double phase = std::fmod(t, 120.0);
    const double v = phase < 90.0 ? 10.0 : 0.0;
    level = congestion(tr, {t, 0.0, 0.0, 0.0, v});
    if (t < 200.0) {
      EXPECT_EQ(level, 0) << t;  // no full cycle yet
    }
  }
  EXPECT_EQ(level, 1);
}

TEST(Features, TimeZoneTable) {
  EXPECT_EQ(time_zone({6, 0}, 0.0), 0);
  EXPECT_EQ(time_zone({9, 59}, 59.0), 0);
  EXPECT_EQ(time_zone({10, 0}, 0.0), 1);
  EXPECT_EQ(time_zone({15, 59}, 0.0), 1);
  EXPECT_EQ(time_zone({16, 0}, 0.0), 2);
  EXPECT_EQ(time_zone({21, 59}, 0.0), 2);
  EXPECT_EQ(time_zone({22, 0}, 0.0), 3);
  EXPECT_EQ(time_zone({5, 59}, 0.0), 3);
  EXPECT_EQ(time_zone({23, 30}, 3600.0), 3);   // wraps past midnight
  EXPECT_EQ(time_zone({5, 30}, 1800.0), 0);
}

TEST(Features, WindowsCoverTheTrip) {
  const auto trip = ramp_trip(62.0, 2.0, 0.5, 10.0);
  const auto w = windows(trip);
  ASSERT_EQ(w.size(), 13u);  // floor(62 / 5) + 1
  for (std::size_t k = 0; k < w.size(); ++k) {
    EXPECT_EQ(w[k].window_index, static_cast<int>(k));
    EXPECT_DOUBLE_EQ(w[k].t_mid, 5.0 * k + 2.5);
    EXPECT_DOUBLE_EQ(w[k].travel_time, w[k].t_mid);
    EXPECT_NEAR(w[k].speed, 10.0, 1e-9);
    EXPECT_EQ(w[k].congestion, 0);
  }
  // Linear accel -> constant jerk, smoothing preserves it away from edges.
  EXPECT_NEAR(w[5].jerk, 0.5, 1e-9);
  // 10 m/s for 32.5 s
  EXPECT_NEAR(w[6].distance, 0.325, 1e-6);
  EXPECT_EQ(w[0].zone, 0);
  EXPECT_EQ(w[12].zone, 1);  // 10:00:02
}
