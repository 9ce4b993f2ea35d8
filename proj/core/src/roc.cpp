#include "ridecomfort/roc.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("labels", "length differs from scores");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positives = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      const int y = labels[order[k]];
      if (y != 0 && y != 1) throw ValidationError("labels", "expected 0 or 1");
      if (y == 1) {
        positives += 1.0;
        rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw UndefinedMetricError("AUC undefined: both classes must be present");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

RocResult multiclass_auc(std::span<const IndicatorVector> predictions, std::span<const int> levels) {
  if (predictions.size() != levels.size()) throw ValidationError("levels", "length differs from predictions");
  const std::set<int> present(levels.begin(), levels.end());
  for (int l : present) {
    if (l < 1 || l > kComfortLevels) throw ValidationError("level", "expected 1..5");
  }
  if (present.size() < 2) throw UndefinedMetricError("AUC undefined: fewer than two levels present");

  RocResult r;
  std::vector<double> scores(predictions.size());
  std::vector<int> labels(predictions.size());
  for (int level = 1; level <= kComfortLevels; ++level) {
    if (!present.count(level)) {
      r.absent.push_back(level);
      continue;
    }
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      scores[i] = predictions[i].p[static_cast<std::size_t>(level - 1)];
      labels[i] = levels[i] == level ? 1 : 0;
    }
    r.per_class[level] = roc_auc(scores, labels);
  }
  double sum = 0.0;
  for (const auto& [level, auc] : r.per_class) sum += auc;
  r.macro = sum / static_cast<double>(r.per_class.size());
  return r;
}

}  // namespace ridecomfort
