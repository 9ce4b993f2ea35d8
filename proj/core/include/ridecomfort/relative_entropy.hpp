#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "ridecomfort/detector.hpp"

namespace ridecomfort {

struct RelativeEntropyConfig {
  std::size_t window = 55;
  std::size_t bins = 10;
  double chi_threshold = 1.0;  ///< raw statistic below which a window joins a hypothesis
};

void validate(const RelativeEntropyConfig& cfg);

/// Chi-square CDF with `dof` degrees of freedom.
double chi_square_cdf(double x, double dof);

/// Multinomial relative-entropy detector. Each full sliding window is
/// histogrammed over the running value range and compared against every
/// accepted hypothesis by the statistic 2 * window * KL(window || hypothesis).
/// The score is the chi-square CDF (bins - 1 dof) of the smallest statistic.
class RelativeEntropyDetector final : public StreamingDetector {
 public:
  explicit RelativeEntropyDetector(const RelativeEntropyConfig& cfg = {});

  std::string kind() const override { return "re"; }
  double step(double x) override;
  double score() const override { return score_; }
  std::size_t steps() const override { return steps_; }
  nlohmann::json to_json() const override;
  static RelativeEntropyDetector from_json(const nlohmann::json& j);

  std::size_t hypothesis_count() const { return hypotheses_.size(); }
  /// Statistic of the most recent full window against its closest hypothesis.
  double last_statistic() const { return statistic_; }

 private:
  struct Hypothesis {
    std::vector<double> values;  // founding window
    std::size_t windows = 1;     // windows merged into it
  };

  std::vector<double> histogram(const std::vector<double>& values) const;

  RelativeEntropyConfig cfg_;
  std::deque<double> window_;
  std::vector<Hypothesis> hypotheses_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double score_ = 0.0;
  double statistic_ = 0.0;
  std::size_t steps_ = 0;
};

}  // namespace ridecomfort
