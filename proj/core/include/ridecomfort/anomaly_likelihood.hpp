#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ridecomfort {

/// Standard normal upper tail probability P(Z > z).
double q_function(double z);

/// Likelihood that the short-term mean error is abnormally high:
/// 1 - Q((short_mean - mean) / max(sd, sd_floor)), clamped to [0, 1].
double tail_likelihood(double short_mean, double mean, double sd, double sd_floor = 1e-6);

/// Anomaly rule: likelihood >= 1 - epsilon.
bool is_anomalous(double likelihood, double epsilon = 1e-5);

struct AnomalyLikelihoodConfig {
  std::size_t window = 4000;     ///< W
  std::size_t short_window = 10;  ///< W_short
  double sd_floor = 1e-6;
};

void validate(const AnomalyLikelihoodConfig& cfg);

/// Rolling distribution of raw prediction errors. Until `window` scores have
/// been seen, the statistics use all scores so far.
class AnomalyLikelihoodState {
 public:
  explicit AnomalyLikelihoodState(const AnomalyLikelihoodConfig& cfg = {});

  /// Records `raw` and returns the likelihood of the updated state.
  double update(double raw);

  double mean() const { return mean_; }
  double sd() const { return sd_; }
  double short_mean() const { return short_mean_; }
  std::size_t size() const { return filled_; }
  const AnomalyLikelihoodConfig& config() const { return cfg_; }

  nlohmann::json to_json() const;
  static AnomalyLikelihoodState from_json(const nlohmann::json& j);

 private:
  void recompute();
  /// i-th most recent score, i = 0 is the newest.
  double recent(std::size_t i) const;

  AnomalyLikelihoodConfig cfg_;
  std::vector<double> ring_;
  std::size_t head_ = 0;  // next write position
  std::size_t filled_ = 0;
  double mean_ = 0.0;
  double sd_ = 0.0;
  double short_mean_ = 0.0;
};

}  // namespace ridecomfort
