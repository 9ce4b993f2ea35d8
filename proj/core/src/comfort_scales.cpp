#include "ridecomfort/comfort_scales.hpp"

#include <array>
#include <cmath>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

constexpr std::array<double, 5> kIsoBands{0.315, 0.5, 0.8, 1.25, 2.5};

}  // namespace

int iso_level(double a_v) {
  int level = 1;
  for (double edge : kIsoBands) {
    if (a_v > edge) ++level;
  }
  return level;
}

IsoComfort iso_comfort(double ax, double ay, double az) {
  if (!std::isfinite(ax) || !std::isfinite(ay) || !std::isfinite(az)) {
    throw ValidationError("acceleration", "must be finite");
  }
  const double wx = 1.4 * ax;
  const double wy = 1.4 * ay;
  IsoComfort out;
  out.a_v = std::sqrt(wx * wx + wy * wy + az * az);
  out.level = iso_level(out.a_v);
  return out;
}

RelabelScheme parse_relabel_scheme(const std::string& name) {
  if (name == "five_to_three") return RelabelScheme::five_to_three;
  if (name == "six_to_three") return RelabelScheme::six_to_three;
  throw ConfigError("unknown relabel scheme '" + name + "'");
}

int relabel(int level, RelabelScheme scheme) {
  switch (scheme) {
    case RelabelScheme::five_to_three:
      if (level < 1 || level > 5) throw ValidationError("level", "expected 1..5");
      return level <= 2 ? 1 : (level == 3 ? 2 : 3);
    case RelabelScheme::six_to_three:
      if (level < 1 || level > 6) throw ValidationError("level", "expected 1..6");
      return (level + 1) / 2;
  }
  throw ValidationError("scheme", "unknown relabel scheme");
}

}  // namespace ridecomfort
