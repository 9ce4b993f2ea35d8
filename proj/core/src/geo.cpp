#include "ridecomfort/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ridecomfort {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlambda = (lon2 - lon1) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

LatLon offset_km(LatLon origin, double north_km, double east_km) {
  const double dlat = north_km / kEarthRadiusKm / kDegToRad;
  const double dlon = east_km / (kEarthRadiusKm * std::cos(origin.lat * kDegToRad)) / kDegToRad;
  return {origin.lat + dlat, origin.lon + dlon};
}

}  // namespace ridecomfort
