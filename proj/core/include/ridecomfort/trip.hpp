#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ridecomfort {

/// One timestamped reading from a pre-oriented phone.
struct SensorSample {
  double t = 0.0;        ///< seconds since trip start
  double accel_y = 0.0;  ///< m/s^2, vehicle longitudinal axis
  double lat = 0.0;      ///< degrees
  double lon = 0.0;      ///< degrees
  std::optional<double> speed;  ///< m/s; absent when the GPS fix had no speed

  bool operator==(const SensorSample&) const = default;
};

/// Local wall-clock time of day.
struct ClockTime {
  int hour = 0;
  int minute = 0;

  int seconds_of_day() const { return hour * 3600 + minute * 60; }
  bool operator==(const ClockTime&) const = default;
};

/// Parses "HH:MM". Throws ValidationError("start_clock") when malformed.
ClockTime parse_clock(const std::string& text);
std::string format_clock(const ClockTime& clock);

struct TripMeta {
  std::string trip_id;
  std::string commuter_id;
  ClockTime start_clock;
  double sample_window = 5.0;  ///< seconds

  bool operator==(const TripMeta&) const = default;
};

/// Commuter-reported comfort level, 1 (most comfortable) .. 5.
struct ComfortLabel {
  double t = 0.0;
  int level = 1;

  bool operator==(const ComfortLabel&) const = default;
};

struct TripRecord {
  TripMeta meta;
  std::vector<SensorSample> samples;
  std::vector<ComfortLabel> labels;
  /// Per-window injected-anomaly flags; synthetic trips only.
  std::optional<std::vector<bool>> ground_truth_anomaly;

  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
  bool operator==(const TripRecord&) const = default;
};

/// Validates every TripRecord invariant; throws ValidationError naming the
/// first offending field.
void validate(const TripRecord& record);

/// Level in force at time `t`: the last label at or before `t`, else 1.
int label_at(const std::vector<ComfortLabel>& labels, double t);

inline constexpr int kComfortLevels = 5;
inline constexpr int kTimeZones = 4;

/// Model input for one window.
struct FeatureVector {
  double l_speed = 0.0;  ///< discomfort likelihood, speed
  double l_jerk = 0.0;   ///< discomfort likelihood, jerkiness
  double l_cong = 0.0;   ///< discomfort likelihood, congestion
  double travel_time = 0.0;  ///< T_t, seconds
  double distance = 0.0;     ///< d_t, km
  int zone = 0;              ///< Z, time-of-day zone 0..3

  bool operator==(const FeatureVector&) const = default;
};

void validate(const FeatureVector& fv);

/// Softmax output over comfort levels; p[0] is level 1.
struct IndicatorVector {
  std::array<double, kComfortLevels> p{};

  /// Level with the highest probability, lowest level on ties.
  int predicted_level() const;
};

void validate(const IndicatorVector& iv);

}  // namespace ridecomfort
