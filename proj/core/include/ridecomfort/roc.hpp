#pragma once

#include <map>
#include <span>
#include <vector>

#include "ridecomfort/trip.hpp"

namespace ridecomfort {

/// Probability that a random positive outranks a random negative, ties
/// counting one half. `labels` are 0/1. Throws UndefinedMetricError unless
/// both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct RocResult {
  std::map<int, double> per_class;  ///< level -> one-vs-all AUC
  double macro = 0.0;               ///< mean over levels present
  std::vector<int> absent;          ///< levels with no true samples
};

/// One-vs-all AUC per true level, scoring each level by its probability.
/// Throws UndefinedMetricError with fewer than two distinct levels.
RocResult multiclass_auc(std::span<const IndicatorVector> predictions, std::span<const int> levels);

}  // namespace ridecomfort
