#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ridecomfort/mtl_train.hpp"

namespace ridecomfort {

/// True iff the top two probabilities differ by less than `gap`. Differences
/// within 1e-12 of `gap` count as equal to it, so rounding in the inputs
/// cannot flip the strict comparison.
bool should_query(const IndicatorVector& iv, double gap = 0.1);

/// Length of the span that may carry at most one query per trip (s).
inline constexpr double kQuerySpan = 300.0;

struct FeedbackQuery {
  std::string commuter_id;
  std::string trip_id;
  int window_index = 0;
  double t = 0.0;
  FeatureVector x;
  IndicatorVector indicator;
  std::optional<int> answer;
};

/// Single-writer log of comfort queries put to commuters.
class FeedbackQueue {
 public:
  /// Logs a query when `iv` is ambiguous and the (trip, span of t) has not
  /// been queried before. Returns the query index if one was logged.
  std::optional<std::size_t> offer(const std::string& commuter_id, const std::string& trip_id,
                                   int window_index, double t, const FeatureVector& x,
                                   const IndicatorVector& iv, double gap = 0.1);
  void answer(std::size_t index, int level);

  const std::vector<FeedbackQuery>& queries() const { return queries_; }
  std::size_t pending() const;
  std::size_t answered_count() const;
  std::vector<LabeledFeature> answered() const;

  void save(const std::filesystem::path& path) const;
  static FeedbackQueue load(const std::filesystem::path& path);

 private:
  std::vector<FeedbackQuery> queries_;
  std::set<std::pair<std::string, long>> spans_;
};

/// Appends the queue's answered labels to `dataset` and continues training
/// `model` on the result. New commuters get fresh heads. Without answered
/// labels nothing changes and an empty result is returned.
TrainResult retrain(MtlModel& model, const FeedbackQueue& queue, std::vector<LabeledFeature>& dataset,
                    const TrainConfig& cfg);

}  // namespace ridecomfort
