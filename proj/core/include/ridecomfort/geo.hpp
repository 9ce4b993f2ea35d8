#pragma once

namespace ridecomfort {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in km between two (lat, lon) points in degrees.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// Point reached by moving `north_km`/`east_km` from (lat, lon) on a local
/// equirectangular approximation. Used to lay out synthetic routes.
struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};
LatLon offset_km(LatLon origin, double north_km, double east_km);

}  // namespace ridecomfort
