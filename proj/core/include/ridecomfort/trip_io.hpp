#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ridecomfort/trip.hpp"

namespace ridecomfort {

// Line-delimited trip format:
//
//   #meta trip_id=<s> commuter_id=<s> start_clock=<HH:MM> window=<float>
//   S <t> <accel_y> <lat> <lon> <speed|->  [gyro/mag fields ignored]
//   L <t> <level>
//   A <window_index> <0|1>
//
// Other '#' lines and blank lines are skipped.

TripRecord parse_trip(std::istream& in);
TripRecord parse_trip(const std::filesystem::path& path);

/// Serializes `record` (validated first). Output is byte-deterministic.
std::string format_trip(const TripRecord& record);
void write_trip(const TripRecord& record, std::ostream& out);
/// Atomic: writes a sibling temp file then renames it over `path`.
void write_trip(const TripRecord& record, const std::filesystem::path& path);

/// Shortest decimal (non-exponent) text that parses back to exactly `v`.
std::string format_double(double v);
/// Strict parse of a whole token; nullopt-style failure reported by throwing
/// ParseError on `line`.
double parse_double(const std::string& token, std::size_t line);

}  // namespace ridecomfort
