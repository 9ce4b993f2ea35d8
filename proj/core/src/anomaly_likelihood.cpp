#include "ridecomfort/anomaly_likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

double q_function(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double tail_likelihood(double short_mean, double mean, double sd, double sd_floor) {
  const double z = (short_mean - mean) / std::max(sd, sd_floor);
  // 1 - Q(z) = Q(-z); evaluating it this way avoids cancellation for z << 0.
  return std::clamp(q_function(-z), 0.0, 1.0);
}

bool is_anomalous(double likelihood, double epsilon) { return likelihood >= 1.0 - epsilon; }

void validate(const AnomalyLikelihoodConfig& c) {
  if (c.window < 1) throw ValidationError("likelihood.window", "must be >= 1");
  if (c.short_window < 1 || c.short_window > c.window) {
    throw ValidationError("likelihood.short_window", "must be in [1, window]");
  }
  if (!(c.sd_floor > 0.0)) throw ValidationError("likelihood.sd_floor", "must be positive");
}

AnomalyLikelihoodState::AnomalyLikelihoodState(const AnomalyLikelihoodConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  ring_.assign(cfg_.window, 0.0);
}

double AnomalyLikelihoodState::recent(std::size_t i) const {
  return ring_[(head_ + ring_.size() - 1 - i) % ring_.size()];
}

double AnomalyLikelihoodState::update(double raw) {
  if (!std::isfinite(raw)) throw ValidationError("raw", "score must be finite");
  ring_[head_] = raw;
  head_ = (head_ + 1) % ring_.size();
  filled_ = std::min(filled_ + 1, ring_.size());
  recompute();
  return tail_likelihood(short_mean_, mean_, sd_, cfg_.sd_floor);
}

void AnomalyLikelihoodState::recompute() {
  double sum = 0.0;
  for (std::size_t i = 0; i < filled_; ++i) sum += recent(i);
  mean_ = sum / static_cast<double>(filled_);
  double ss = 0.0;
  for (std::size_t i = 0; i < filled_; ++i) {
    const double d = recent(i) - mean_;
    ss += d * d;
  }
  sd_ = std::sqrt(ss / static_cast<double>(filled_));
  const std::size_t k = std::min(cfg_.short_window, filled_);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += recent(i);
  short_mean_ = s / static_cast<double>(k);
}

nlohmann::json AnomalyLikelihoodState::to_json() const {
  std::vector<double> ordered;
  for (std::size_t i = filled_; i-- > 0;) ordered.push_back(recent(i));
  return {{"window", cfg_.window},
          {"short_window", cfg_.short_window},
          {"sd_floor", cfg_.sd_floor},
          {"scores", ordered}};
}

AnomalyLikelihoodState AnomalyLikelihoodState::from_json(const nlohmann::json& j) {
  AnomalyLikelihoodConfig cfg;
  j.at("window").get_to(cfg.window);
  j.at("short_window").get_to(cfg.short_window);
  j.at("sd_floor").get_to(cfg.sd_floor);
  AnomalyLikelihoodState st(cfg);
  const auto scores = j.at("scores").get<std::vector<double>>();
  if (scores.size() > cfg.window) throw ParseError(0, "likelihood window overfull");
  for (double s : scores) {
    st.ring_[st.head_] = s;
    st.head_ = (st.head_ + 1) % st.ring_.size();
  }
  st.filled_ = scores.size();
  if (st.filled_ > 0) st.recompute();
  return st;
}

}  // namespace ridecomfort
