#include "ridecomfort/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

constexpr double kGapTolerance = 1e-12;

}  // namespace

bool should_query(const IndicatorVector& iv, double gap) {
  auto p = iv.p;
  std::partial_sort(p.begin(), p.begin() + 2, p.end(), std::greater<>());
  return p[0] - p[1] < gap - kGapTolerance;
}

std::optional<std::size_t> FeedbackQueue::offer(const std::string& commuter_id,
                                                const std::string& trip_id, int window_index,
                                                double t, const FeatureVector& x,
                                                const IndicatorVector& iv, double gap) {
  if (!should_query(iv, gap)) return std::nullopt;
  const auto span = static_cast<long>(std::floor(t / kQuerySpan));
  if (!spans_.emplace(trip_id, span).second) return std::nullopt;
  queries_.push_back({commuter_id, trip_id, window_index, t, x, iv, std::nullopt});
  return queries_.size() - 1;
}

void FeedbackQueue::answer(std::size_t index, int level) {
  if (index >= queries_.size()) throw ValidationError("query", "no such query");
  if (level < 1 || level > kComfortLevels) throw ValidationError("level", "expected 1..5");
  queries_[index].answer = level;
}

std::size_t FeedbackQueue::pending() const {
  return static_cast<std::size_t>(
      std::count_if(queries_.begin(), queries_.end(), [](const FeedbackQuery& q) { return !q.answer; }));
}

std::size_t FeedbackQueue::answered_count() const { return queries_.size() - pending(); }

std::vector<LabeledFeature> FeedbackQueue::answered() const {
  std::vector<LabeledFeature> out;
  for (const auto& q : queries_) {
    if (q.answer) out.push_back({q.commuter_id, q.trip_id, q.window_index, q.x, *q.answer});
  }
  return out;
}

void FeedbackQueue::save(const std::filesystem::path& path) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& q : queries_) {
    nlohmann::json j = {{"commuter_id", q.commuter_id},
                        {"trip_id", q.trip_id},
                        {"window_index", q.window_index},
                        {"t", q.t},
                        {"x", {q.x.l_speed, q.x.l_jerk, q.x.l_cong, q.x.travel_time, q.x.distance, q.x.zone}},
                        {"indicator", q.indicator.p}};
    j["answer"] = q.answer ? nlohmann::json(*q.answer) : nlohmann::json(nullptr);
    arr.push_back(std::move(j));
  }
  write_file_atomic(path, arr.dump(1) + "\n");
}

FeedbackQueue FeedbackQueue::load(const std::filesystem::path& path) {
  FeedbackQueue queue;
  try {
    for (const auto& j : nlohmann::json::parse(read_file(path))) {
      FeedbackQuery q;
      j.at("commuter_id").get_to(q.commuter_id);
      j.at("trip_id").get_to(q.trip_id);
      j.at("window_index").get_to(q.window_index);
      j.at("t").get_to(q.t);
      const auto& x = j.at("x");
      q.x = {x.at(0).get<double>(), x.at(1).get<double>(), x.at(2).get<double>(),
             x.at(3).get<double>(), x.at(4).get<double>(), x.at(5).get<int>()};
      j.at("indicator").get_to(q.indicator.p);
      if (!j.at("answer").is_null()) q.answer = j.at("answer").get<int>();
      queue.spans_.emplace(q.trip_id, static_cast<long>(std::floor(q.t / kQuerySpan)));
      queue.queries_.push_back(std::move(q));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return queue;
}

TrainResult retrain(MtlModel& model, const FeedbackQueue& queue, std::vector<LabeledFeature>& dataset,
                    const TrainConfig& cfg) {
  auto fresh = queue.answered();
  if (fresh.empty()) return {};
  dataset.insert(dataset.end(), fresh.begin(), fresh.end());
  return train(model, dataset, {}, cfg);
}

}  // namespace ridecomfort
