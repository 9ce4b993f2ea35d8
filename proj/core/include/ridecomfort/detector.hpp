#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ridecomfort {

/// Common streaming contract shared by HTM and the baseline detectors.
/// A detector is constructed ready to use, consumes one value per step, and
/// reports an anomaly score in [0, 1].
class StreamingDetector {
 public:
  virtual ~StreamingDetector() = default;

  virtual std::string kind() const = 0;
  /// Consumes `x` and returns the updated score.
  virtual double step(double x) = 0;
  /// Score returned by the most recent step (0 before any step).
  virtual double score() const = 0;
  virtual std::size_t steps() const = 0;
  /// Complete state; restoring it reproduces all later outputs.
  virtual nlohmann::json to_json() const = 0;
};

struct BootstrapResult {
  bool ready = false;        ///< stream extends past the bootstrap prefix
  std::size_t consumed = 0;  ///< values stepped
  std::vector<double> scores;  ///< detector output for each consumed value
};

/// Steps `detector` through the first `bootstrap_steps` values of `stream`.
/// A stream no longer than the prefix leaves the detector not ready.
BootstrapResult bootstrap(StreamingDetector& detector, std::span<const double> stream,
                          std::size_t bootstrap_steps);

}  // namespace ridecomfort
