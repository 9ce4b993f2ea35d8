#include "ridecomfort/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ridecomfort/error.hpp"
#include "ridecomfort/geo.hpp"

namespace ridecomfort {

namespace {

constexpr double kSpeedJumpSd = 2.5;     // m/s per speed event
constexpr double kSpeedRise = 4.0;       // s
constexpr double kSpeedRelax = 30.0;     // s
constexpr double kDriftAmplitude = 0.8;  // m/s
constexpr double kDriftPeriod = 400.0;   // s
constexpr double kStopRampDown = 6.0;    // s
constexpr double kStopRampUp = 10.0;     // s
constexpr double kStopHoldMin = 15.0;    // s
constexpr double kStopHoldMax = 45.0;    // s
constexpr double kJoltDuration = 1.5;    // s
constexpr double kAccelNoise = 0.05;     // m/s^2
constexpr double kGpsSpeedNoise = 0.1;   // m/s
constexpr double kSaturation = 16.0;     // multiplier giving full deviation

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

struct SpeedEvent {
  double t;
  double delta;
};

struct Stop {
  double t;
  double hold;
};

struct Jolt {
  double t;
  double amplitude;
};

class SpeedProfile {
 public:
  SpeedProfile(double cruise, double phase, std::vector<SpeedEvent> events,
               std::vector<Stop> stops)
      : cruise_(cruise), phase_(phase), events_(std::move(events)), stops_(std::move(stops)) {}

  double operator()(double t) const {
    double v = cruise_ + kDriftAmplitude * std::sin(2.0 * std::numbers::pi * t / kDriftPeriod + phase_);
    for (const auto& e : events_) {
      const double tau = t - e.t;
      if (tau < 0.0) break;
      if (tau > 12.0 * kSpeedRelax) continue;
      const double shape = tau < kSpeedRise ? smoothstep(tau / kSpeedRise)
                                            : std::exp(-(tau - kSpeedRise) / kSpeedRelax);
      v += e.delta * shape;
    }
    v = std::max(v, 0.0);
    double factor = 1.0;
    for (const auto& s : stops_) {
      const double tau = t - s.t;
      if (tau < 0.0) break;
      double f = 1.0;
      if (tau < kStopRampDown) {
        f = 1.0 - smoothstep(tau / kStopRampDown);
      } else if (tau < kStopRampDown + s.hold) {
        f = 0.0;
      } else {
        f = smoothstep((tau - kStopRampDown - s.hold) / kStopRampUp);
      }
      factor = std::min(factor, f);
    }
    return v * factor;
  }

 private:
  double cruise_;
  double phase_;
  std::vector<SpeedEvent> events_;
  std::vector<Stop> stops_;
};

std::vector<RateModulation> modulation_for(const ScenarioScript& s, Feature f) {
  std::vector<RateModulation> out;
  for (const auto& a : s.anomaly_intervals) {
    if (a.feature == f) out.push_back({a.start, a.end, a.multiplier});
  }
  return out;
}

}  // namespace

double feature_deviation(const ScenarioScript& script, Feature f, double lo, double hi) {
  double m = 1.0;
  for (const auto& a : script.anomaly_intervals) {
    if (a.feature == f && a.start < hi && a.end > lo) m = std::max(m, a.multiplier);
  }
  if (m <= 1.0) return 0.0;
  return std::min(1.0, std::log(m) / std::log(kSaturation));
}

std::vector<bool> anomaly_flags(const ScenarioScript& script, std::size_t window_count) {
  std::vector<bool> flags(window_count, false);
  const double w = script.sample_window;
  for (std::size_t k = 0; k < window_count; ++k) {
    const double lo = static_cast<double>(k) * w;
    const double hi = lo + w;
    for (const auto& a : script.anomaly_intervals) {
      if (a.start < hi && a.end > lo) flags[k] = true;
    }
  }
  return flags;
}

int level_for_score(const CommuterProfile& profile, double s) {
  int level = 1;
  for (double th : profile.thresholds) {
    if (s >= th) ++level;
  }
  return level;
}

std::vector<ComfortLabel> label_oracle(const ScenarioScript& script,
                                       const std::vector<WindowObservation>& windows,
                                       const std::vector<bool>& truth) {
  if (truth.size() != windows.size()) {
    throw ValidationError("truth", "anomaly flags not aligned with windows");
  }
  const auto& p = script.commuter_profile;
  const double w = script.sample_window;
  std::vector<ComfortLabel> labels;
  int current = 0;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    const double lo = static_cast<double>(windows[k].window_index) * w;
    double s = 0.0;
    if (truth[k]) {
      for (auto f : kFeatures) {
        s += p.weights[static_cast<int>(f)] * feature_deviation(script, f, lo, lo + w);
      }
      s *= p.zone_gain[windows[k].zone];
    }
    const int level = level_for_score(p, s);
    if (level != current) {
      labels.push_back({lo, level});
      current = level;
    }
  }
  if (labels.empty()) labels.push_back({0.0, 1});
  return labels;
}

TripRecord render_trip(const ScenarioScript& script, SeededRng& rng) {
  validate(script);
  const double horizon = script.trip_duration;

  // Each process draws from its own child stream so adding an anomaly to one
  // feature leaves the other features' realizations untouched.
  SeededRng speed_rng(mix_seed(rng.next_u64(), 1));
  SeededRng jerk_rng(mix_seed(rng.next_u64(), 2));
  SeededRng cong_rng(mix_seed(rng.next_u64(), 3));
  SeededRng noise_rng(mix_seed(rng.next_u64(), 4));
  SeededRng route_rng(mix_seed(rng.next_u64(), 5));

  std::vector<SpeedEvent> speed_events;
  for (double t : simulate_hawkes(script.speed_process, horizon, speed_rng,
                                  modulation_for(script, Feature::speed))) {
    speed_events.push_back({t, speed_rng.normal(0.0, kSpeedJumpSd)});
  }

  std::vector<Stop> stops;
  for (const auto& e : simulate_st_hawkes(script.congestion_process, horizon, kSynthRegion,
                                          cong_rng, modulation_for(script, Feature::congestion))) {
    stops.push_back({e.t, cong_rng.uniform(kStopHoldMin, kStopHoldMax)});
  }

  std::vector<Jolt> jolts;
  for (const auto& e : simulate_st_hawkes(script.jerk_process, horizon, kSynthRegion, jerk_rng,
                                          modulation_for(script, Feature::jerk))) {
    const double sign = jerk_rng.uniform() < 0.5 ? -1.0 : 1.0;
    jolts.push_back({e.t, sign * jerk_rng.uniform(1.5, 3.0)});
  }

  const double phase = route_rng.uniform(0.0, 2.0 * std::numbers::pi);
  const SpeedProfile speed(script.cruise_speed, phase, std::move(speed_events), std::move(stops));

  TripRecord rec;
  rec.meta.trip_id = script.trip_id;
  rec.meta.commuter_id = script.commuter_id;
  rec.meta.start_clock = script.start_clock;
  rec.meta.sample_window = script.sample_window;

  const double dt = 1.0 / script.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::ceil(horizon * script.sample_rate_hz - 1e-9));
  rec.samples.reserve(n);

  double heading = route_rng.uniform(0.0, 2.0 * std::numbers::pi);
  double segment_left = route_rng.uniform(0.5, 2.0);  // km
  double north = 0.0;
  double east = 0.0;
  double prev_v = speed(0.0);
  std::size_t jolt_begin = 0;
  constexpr double h = 0.05;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double v = speed(t);
    if (i > 0) {
      double ds = 0.5 * (v + prev_v) * dt / 1000.0;  // km
      while (ds > 0.0) {
        const double step = std::min(ds, segment_left);
        north += step * std::cos(heading);
        east += step * std::sin(heading);
        segment_left -= step;
        ds -= step;
        if (segment_left <= 0.0) {
          heading += route_rng.normal(0.0, std::numbers::pi / 6.0);
          segment_left = route_rng.uniform(0.5, 2.0);
        }
      }
    }
    prev_v = v;

    double accel = (speed(t + h) - speed(std::max(0.0, t - h))) / (t + h - std::max(0.0, t - h));
    while (jolt_begin < jolts.size() && jolts[jolt_begin].t + kJoltDuration < t) ++jolt_begin;
    for (std::size_t j = jolt_begin; j < jolts.size() && jolts[j].t <= t; ++j) {
      const double tau = t - jolts[j].t;
      if (tau <= kJoltDuration) {
        accel += jolts[j].amplitude * std::sin(std::numbers::pi * tau / kJoltDuration);
      }
    }
    accel += noise_rng.normal(0.0, kAccelNoise);

    const LatLon pos = offset_km(script.origin, north, east);
    SensorSample s;
    s.t = t;
    s.accel_y = accel;
    s.lat = pos.lat;
    s.lon = pos.lon;
    s.speed = std::max(0.0, v + noise_rng.normal(0.0, kGpsSpeedNoise));
    rec.samples.push_back(s);
  }

  const auto obs = windows(rec);
  auto truth = anomaly_flags(script, obs.size());
  rec.labels = label_oracle(script, obs, truth);
  rec.ground_truth_anomaly = std::move(truth);
  validate(rec);
  return rec;
}

}  // namespace ridecomfort
