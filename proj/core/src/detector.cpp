#include "ridecomfort/detector.hpp"

#include <algorithm>

namespace ridecomfort {

BootstrapResult bootstrap(StreamingDetector& detector, std::span<const double> stream,
                          std::size_t bootstrap_steps) {
  BootstrapResult r;
  r.consumed = std::min(stream.size(), bootstrap_steps);
  r.scores.reserve(r.consumed);
  for (std::size_t i = 0; i < r.consumed; ++i) r.scores.push_back(detector.step(stream[i]));
  r.ready = stream.size() > bootstrap_steps;
  return r;
}

}  // namespace ridecomfort
