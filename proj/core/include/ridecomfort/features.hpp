#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ridecomfort/trip.hpp"

namespace ridecomfort {

/// Per-window instantaneous and spatio-temporal features.
struct WindowObservation {
  int window_index = 0;
  double t_mid = 0.0;        ///< seconds
  double speed = 0.0;        ///< v, m/s
  double jerk = 0.0;         ///< j, m/s^3
  int congestion = 0;        ///< c in {0,1,2}
  double travel_time = 0.0;  ///< T_t, seconds
  double distance = 0.0;     ///< d_t, km
  int zone = 0;              ///< Z in {0..3}

  bool operator==(const WindowObservation&) const = default;
};

struct SmootherConfig {
  int width = 5;  ///< odd sample count; 1 disables smoothing
};

/// Centered moving average of accel_y; edges average the samples available.
std::vector<SensorSample> smooth(std::span<const SensorSample> stream,
                                 const SmootherConfig& cfg);

/// Least-squares slope of accel_y against t. Throws InsufficientDataError
/// with fewer than two samples.
double jerk(std::span<const SensorSample> window);

/// Stop-and-go tracker. A stop begins once speed stays below
/// `stop_speed` for `hold` seconds and ends once it stays at or above it for
/// `hold` seconds. A cycle is the span between two consecutive stop starts.
class CongestionTracker {
 public:
  static constexpr double kStopSpeed = 0.5;     // m/s
  static constexpr double kHold = 5.0;          // s
  static constexpr double kMediumCycle = 60.0;  // s, 1 min
  static constexpr double kHighCycle = 300.0;   // s, 5 min

  /// Feeds one sample and returns the level of the last completed cycle.
  int update(const SensorSample& sample);
  int level() const { return level_; }

  /// Level for a completed cycle of length `t_sm` seconds.
  static int level_for_cycle(double t_sm);

 private:
  double effective_speed(const SensorSample& sample) const;

  bool stopped_ = false;
  std::optional<double> run_start_;  // start of the pending opposite-state run
  std::optional<double> last_stop_start_;
  std::optional<SensorSample> prev_;
  int level_ = 0;
};

/// Congestion level after feeding `sample`; thin wrapper over the tracker.
int congestion(CongestionTracker& state, const SensorSample& sample);

/// Time-of-day zone of start_clock + elapsed: [06,10)=0, [10,16)=1,
/// [16,22)=2, otherwise 3.
int time_zone(const ClockTime& start_clock, double elapsed_s);

/// One observation per sample_window from t=0 through the last sample.
std::vector<WindowObservation> windows(const TripRecord& trip,
                                       const SmootherConfig& smoother = {});

}  // namespace ridecomfort
