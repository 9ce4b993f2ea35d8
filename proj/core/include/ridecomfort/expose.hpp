#pragma once

#include <cstddef>
#include <vector>

#include "ridecomfort/detector.hpp"

namespace ridecomfort {

struct ExposeConfig {
  double decay = 0.01;  ///< weight of the newest point in the embedding
  double gamma = 0.5;   ///< Gaussian kernel exp(-gamma * (zx - zy)^2)
};

void validate(const ExposeConfig& cfg);

/// Decayed EXPoSE. The kernel mean embedding of past points is initialized
/// with the first point and then updated as mu <- (1 - decay) mu + decay phi(x).
/// The score is 1 - <phi(x), mu> on values z-scored by the running mean and
/// standard deviation (current point included).
class ExposeDetector final : public StreamingDetector {
 public:
  explicit ExposeDetector(const ExposeConfig& cfg = {});

  std::string kind() const override { return "expose"; }
  double step(double x) override;
  double score() const override { return score_; }
  std::size_t steps() const override { return steps_; }
  nlohmann::json to_json() const override;
  static ExposeDetector from_json(const nlohmann::json& j);

  std::size_t support_size() const { return history_.size(); }

 private:
  struct Point {
    double x;
    double weight;
  };

  ExposeConfig cfg_;
  std::vector<Point> history_;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double score_ = 0.0;
  std::size_t steps_ = 0;
};

}  // namespace ridecomfort
