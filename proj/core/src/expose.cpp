#include "ridecomfort/expose.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

constexpr double kSdFloor = 1e-6;
constexpr double kNegligibleWeight = 1e-15;

}  // namespace

void validate(const ExposeConfig& c) {
  if (!(c.decay > 0.0 && c.decay < 1.0)) throw ValidationError("expose.decay", "must be in (0,1)");
  if (!(c.gamma > 0.0)) throw ValidationError("expose.gamma", "must be positive");
}

ExposeDetector::ExposeDetector(const ExposeConfig& cfg) : cfg_(cfg) { validate(cfg_); }

double ExposeDetector::step(double x) {
  if (!std::isfinite(x)) throw ValidationError("x", "must be finite");
  ++steps_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(steps_);
  m2_ += delta * (x - mean_);
  const double sd = std::max(std::sqrt(m2_ / static_cast<double>(steps_)), kSdFloor);

  if (history_.empty()) {
    score_ = 1.0;
    history_.push_back({x, 1.0});
    return score_;
  }

  double similarity = 0.0;
  for (const auto& p : history_) {
    const double d = (x - p.x) / sd;
    similarity += p.weight * std::exp(-cfg_.gamma * d * d);
  }
  score_ = std::clamp(1.0 - similarity, 0.0, 1.0);

  for (auto& p : history_) p.weight *= 1.0 - cfg_.decay;
  history_.push_back({x, cfg_.decay});
  std::erase_if(history_, [](const Point& p) { return p.weight < kNegligibleWeight; });
  return score_;
}

nlohmann::json ExposeDetector::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : history_) pts.push_back({p.x, p.weight});
  return {{"kind", "expose"}, {"decay", cfg_.decay}, {"gamma", cfg_.gamma}, {"history", pts},
          {"mean", mean_},    {"m2", m2_},           {"score", score_},    {"steps", steps_}};
}

ExposeDetector ExposeDetector::from_json(const nlohmann::json& j) {
  if (j.at("kind") != "expose") throw ParseError(0, "not an expose checkpoint");
  ExposeConfig cfg;
  j.at("decay").get_to(cfg.decay);
  j.at("gamma").get_to(cfg.gamma);
  ExposeDetector d(cfg);
  for (const auto& p : j.at("history")) d.history_.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  j.at("mean").get_to(d.mean_);
  j.at("m2").get_to(d.m2_);
  j.at("score").get_to(d.score_);
  j.at("steps").get_to(d.steps_);
  return d;
}

}  // namespace ridecomfort
