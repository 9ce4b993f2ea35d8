#pragma once

#include <vector>

#include "ridecomfort/features.hpp"
#include "ridecomfort/random.hpp"
#include "ridecomfort/scenario.hpp"
#include "ridecomfort/trip.hpp"

namespace ridecomfort {

/// Corridor in which jerk and congestion sources are placed.
inline constexpr Region kSynthRegion{0.0, 10.0, 0.0, 1.0};

/// Renders a labeled synthetic trip from `script`.
///
/// Speed follows the cruise speed plus surges/brakes triggered by the speed
/// process; congestion events insert stop-and-go stops; jerk events add
/// short acceleration jolts; accel_y is the derivative of speed plus jolts
/// plus sensor noise. Inside an anomaly interval the named process has its
/// background rate multiplied. Labels come from label_oracle.
TripRecord render_trip(const ScenarioScript& script, SeededRng& rng);

/// Per-window injected-anomaly flags for `window_count` windows.
std::vector<bool> anomaly_flags(const ScenarioScript& script, std::size_t window_count);

/// Latent deviation of feature `f` in window [lo, hi): 0 without an active
/// anomaly, else min(1, ln(multiplier) / ln(16)).
double feature_deviation(const ScenarioScript& script, Feature f, double lo, double hi);

/// Simulated commuter. For each window the latent score
///   s = zone_gain[Z] * sum_f w_f * deviation_f
/// is cut by the profile thresholds into a level 1..5. A label is emitted at
/// t=0 and whenever the level changes, like the collection app's slider.
std::vector<ComfortLabel> label_oracle(const ScenarioScript& script,
                                       const std::vector<WindowObservation>& windows,
                                       const std::vector<bool>& truth);

/// Level the oracle assigns for latent score `s`.
int level_for_score(const CommuterProfile& profile, double s);

}  // namespace ridecomfort
