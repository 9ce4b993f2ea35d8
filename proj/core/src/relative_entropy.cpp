#include "ridecomfort/relative_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

constexpr double kPseudoCount = 1e-4;

}  // namespace

void validate(const RelativeEntropyConfig& c) {
  if (c.bins < 2) throw ValidationError("re.bins", "must be >= 2");
  if (c.window <= c.bins) throw ValidationError("re.window", "must exceed bins");
  if (!(c.chi_threshold >= 0.0)) throw ValidationError("re.chi_threshold", "must be non-negative");
}

double chi_square_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw ValidationError("dof", "must be positive");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(dof / 2.0, x / 2.0);
}

RelativeEntropyDetector::RelativeEntropyDetector(const RelativeEntropyConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
}

std::vector<double> RelativeEntropyDetector::histogram(const std::vector<double>& values) const {
  std::vector<double> h(cfg_.bins, 0.0);
  const double span = hi_ - lo_;
  for (double v : values) {
    std::size_t b = 0;
    if (span > 0.0) {
      const double pos = (v - lo_) / span * static_cast<double>(cfg_.bins);
      b = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(cfg_.bins - 1)));
    }
    h[b] += 1.0;
  }
  return h;
}

double RelativeEntropyDetector::step(double x) {
  if (!std::isfinite(x)) throw ValidationError("x", "must be finite");
  if (steps_ == 0) {
    lo_ = hi_ = x;
  } else {
    lo_ = std::min(lo_, x);
    hi_ = std::max(hi_, x);
  }
  ++steps_;
  window_.push_back(x);
  if (window_.size() > cfg_.window) window_.pop_front();
  if (window_.size() < cfg_.window) {
    score_ = 0.0;
    return score_;
  }

  std::vector<double> current(window_.begin(), window_.end());
  if (hypotheses_.empty()) {
    hypotheses_.push_back({std::move(current), 1});
    score_ = 0.0;
    statistic_ = 0.0;
    return score_;
  }

  const auto p = histogram(current);
  const double n = static_cast<double>(cfg_.window);
  const double smoothed_total = n + kPseudoCount * static_cast<double>(cfg_.bins);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
    const auto q = histogram(hypotheses_[h].values);
    double kl = 0.0;
    for (std::size_t b = 0; b < cfg_.bins; ++b) {
      if (p[b] == 0.0) continue;
      const double pb = p[b] / n;
      const double qb = (q[b] + kPseudoCount) / smoothed_total;
      kl += pb * std::log(pb / qb);
    }
    const double stat = 2.0 * n * std::max(kl, 0.0);
    if (stat < best) {
      best = stat;
      best_index = h;
    }
  }
  statistic_ = best;
  score_ = chi_square_cdf(best, static_cast<double>(cfg_.bins - 1));
  if (best <= cfg_.chi_threshold) {
    ++hypotheses_[best_index].windows;
  } else {
    hypotheses_.push_back({std::move(current), 1});
  }
  return score_;
}

nlohmann::json RelativeEntropyDetector::to_json() const {
  nlohmann::json hyps = nlohmann::json::array();
  for (const auto& h : hypotheses_) hyps.push_back({{"values", h.values}, {"windows", h.windows}});
  return {{"kind", "re"},
          {"window", cfg_.window},
          {"bins", cfg_.bins},
          {"chi_threshold", cfg_.chi_threshold},
          {"buffer", std::vector<double>(window_.begin(), window_.end())},
          {"hypotheses", hyps},
          {"lo", lo_},
          {"hi", hi_},
          {"score", score_},
          {"statistic", statistic_},
          {"steps", steps_}};
}

RelativeEntropyDetector RelativeEntropyDetector::from_json(const nlohmann::json& j) {
  if (j.at("kind") != "re") throw ParseError(0, "not a relative-entropy checkpoint");
  RelativeEntropyConfig cfg;
  j.at("window").get_to(cfg.window);
  j.at("bins").get_to(cfg.bins);
  j.at("chi_threshold").get_to(cfg.chi_threshold);
  RelativeEntropyDetector d(cfg);
  const auto buf = j.at("buffer").get<std::vector<double>>();
  d.window_.assign(buf.begin(), buf.end());
  for (const auto& h : j.at("hypotheses")) {
    d.hypotheses_.push_back({h.at("values").get<std::vector<double>>(), h.at("windows").get<std::size_t>()});
  }
  j.at("lo").get_to(d.lo_);
  j.at("hi").get_to(d.hi_);
  j.at("score").get_to(d.score_);
  j.at("statistic").get_to(d.statistic_);
  j.at("steps").get_to(d.steps_);
  return d;
}

}  // namespace ridecomfort
