#pragma once

#include <string>

namespace ridecomfort {

struct IsoComfort {
  double a_v = 0.0;  ///< total weighted RMS acceleration, m/s^2
  int level = 1;     ///< 1 (not uncomfortable) .. 6 (extremely uncomfortable)
};

/// Total vibration value sqrt((1.4 ax)^2 + (1.4 ay)^2 + az^2) and its
/// ISO 2631-1 comfort band.
IsoComfort iso_comfort(double ax, double ay, double az);

/// ISO 2631-1 band for a total vibration value.
int iso_level(double a_v);

enum class RelabelScheme { five_to_three, six_to_three };

RelabelScheme parse_relabel_scheme(const std::string& name);

/// Collapses a 5- or 6-point Likert level onto 1..3. Throws ValidationError
/// for a level outside the source scale.
int relabel(int level, RelabelScheme scheme);

}  // namespace ridecomfort
