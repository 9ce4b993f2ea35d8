#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ridecomfort/geo.hpp"
#include "ridecomfort/hawkes.hpp"
#include "ridecomfort/trip.hpp"

namespace ridecomfort {

/// The three spatio-temporal comfort features, in canonical order.
enum class Feature { speed = 0, jerk = 1, congestion = 2 };
inline constexpr int kFeatureCount = 3;
inline constexpr std::array<Feature, kFeatureCount> kFeatures = {Feature::speed, Feature::jerk,
                                                                  Feature::congestion};

const char* feature_name(Feature f);
/// Accepts "speed", "jerk"/"jerkiness", "congestion".
Feature parse_feature(const std::string& name);

struct AnomalyInterval {
  double start = 0.0;  ///< s
  double end = 0.0;    ///< s
  Feature feature = Feature::jerk;
  double multiplier = 8.0;  ///< background-rate multiplier inside the interval
};

/// How a simulated commuter turns driving deviations into comfort levels.
struct CommuterProfile {
  /// Sensitivity to speed, jerkiness, congestion; sums to 1.
  std::array<double, kFeatureCount> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  /// Latent-score cut points between levels 1|2, 2|3, 3|4, 4|5.
  std::array<double, 4> thresholds{0.12, 0.28, 0.45, 0.62};
  /// Multiplier on the latent score per time-of-day zone.
  std::array<double, kTimeZones> zone_gain{1.0, 1.0, 1.1, 1.3};
};

struct ScenarioScript {
  std::string trip_id = "trip";
  std::string commuter_id = "commuter";
  ClockTime start_clock{8, 0};
  double trip_duration = 1800.0;  ///< s
  double sample_rate_hz = 2.0;
  double sample_window = 5.0;  ///< s
  double cruise_speed = 12.0;  ///< m/s
  LatLon origin{22.5726, 88.3639};

  TemporalHawkesParams speed_process{1.0 / 150.0, 0.02, 0.05};
  SpatioTemporalHawkesParams jerk_process{1.0 / 1200.0, 0.3, 1.0, 0.3};
  SpatioTemporalHawkesParams congestion_process{1.0 / 6000.0, 0.004, 0.01, 0.5};

  std::vector<AnomalyInterval> anomaly_intervals;
  CommuterProfile commuter_profile;
};

/// Throws ValidationError naming the violated field.
void validate(const ScenarioScript& script);

/// A scenario file: a base script plus optional per-trip randomization used
/// to synthesize whole datasets.
struct ScenarioTemplate {
  ScenarioScript base;
  /// When set, each trip draws its duration uniformly from [lo, hi].
  std::optional<std::array<double, 2>> duration_range;
  /// When set, each trip draws a start clock uniformly over the day.
  bool random_start_clock = false;
  /// Number of anomaly intervals drawn per trip (in addition to `base`).
  int random_anomalies = 0;
  std::array<double, 2> random_anomaly_duration{240.0, 360.0};
  double random_anomaly_multiplier = 8.0;
  /// Random intervals start no earlier than this (s).
  double random_anomaly_earliest = 660.0;
  /// Features random intervals may use.
  std::vector<Feature> random_anomaly_features{Feature::speed, Feature::jerk, Feature::congestion};
  /// When > 0, trips cycle over commuters c<offset>..c<offset+n-1> with
  /// heterogeneous profiles derived from `profile_seed`.
  int commuters = 0;
  int commuter_offset = 0;
  std::uint64_t profile_seed = 7;
};

ScenarioTemplate parse_scenario(const std::string& text);
ScenarioTemplate load_scenario(const std::filesystem::path& path);
std::string format_scenario(const ScenarioTemplate& tmpl);

/// Heterogeneous profile for commuter number `index`; a pure function of
/// (profile_seed, index).
CommuterProfile random_profile(std::uint64_t profile_seed, int index);
std::string commuter_name(int index);

/// Concrete script for trip `trip_index` of a dataset synthesized with `seed`.
ScenarioScript instantiate(const ScenarioTemplate& tmpl, std::size_t trip_index,
                           std::uint64_t seed);

}  // namespace ridecomfort
