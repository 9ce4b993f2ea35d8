#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ridecomfort/random.hpp"

namespace ridecomfort {

struct SobolResult {
  std::vector<double> total;       ///< total-order index per input
  std::vector<double> half_width;  ///< 95% bootstrap half-width per input
  std::size_t samples = 0;         ///< base sample count N
  std::size_t evaluations = 0;     ///< model calls, N * (k + 2)
};

using SobolModel = std::function<double(std::span<const double>)>;

/// Total-order indices by Saltelli sampling (A, B, and A with column i from
/// B) and the Jansen estimator, inputs uniform on `ranges`. Throws
/// ValidationError for N < 256 and UndefinedMetricError for a constant output.
SobolResult sobol_total_order(const SobolModel& model, const std::vector<std::pair<double, double>>& ranges,
                              std::size_t n, SeededRng& rng, std::size_t bootstrap = 100);

}  // namespace ridecomfort
