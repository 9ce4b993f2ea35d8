#pragma once

#include <filesystem>
#include <string>

#include "ridecomfort/random.hpp"
#include "ridecomfort/trip.hpp"

namespace rc_test {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("ridecomfort-" + tag + "-" + std::to_string(ridecomfort::hash_string(tag) ^ counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static unsigned long& counter() {
    static unsigned long c = 0;
    return c;
  }
  std::filesystem::path path_;
};

// Valid record with awkward values: missing speeds, tiny/huge magnitudes.
inline ridecomfort::TripRecord random_trip(ridecomfort::SeededRng& rng, std::size_t samples = 50) {
  using namespace ridecomfort;
  TripRecord r;
  r.meta.trip_id = "t" + std::to_string(rng.below(100000));
  r.meta.commuter_id = "c" + std::to_string(rng.below(100));
  r.meta.start_clock = {static_cast<int>(rng.below(24)), static_cast<int>(rng.below(60))};
  r.meta.sample_window = rng.uniform(0.5, 10.0);
  double t = rng.uniform(0.0, 1e-3);
  for (std::size_t i = 0; i < samples; ++i) {
    SensorSample s;
    s.t = t;
    s.accel_y = rng.normal(0.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 6.0));
    s.lat = rng.uniform(-90.0, 90.0);
    s.lon = rng.uniform(-180.0, 180.0);
    if (rng.uniform() < 0.8) s.speed = rng.uniform(0.0, 40.0);
    r.samples.push_back(s);
    t += rng.uniform(1e-6, 2.0);
  }
  double lt = 0.0;
  const auto labels = rng.below(5);
  for (std::uint64_t i = 0; i < labels; ++i) {
    lt = rng.uniform(lt, r.duration());
    r.labels.push_back({lt, static_cast<int>(1 + rng.below(5))});
  }
  if (rng.uniform() < 0.5) {
    std::vector<bool> flags(1 + rng.below(20));
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = rng.uniform() < 0.3;
    r.ground_truth_anomaly = flags;
  }
  return r;
}

}  // namespace rc_test
