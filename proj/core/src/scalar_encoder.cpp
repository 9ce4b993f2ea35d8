#include "ridecomfort/scalar_encoder.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

void validate(const ScalarEncoderConfig& cfg) {
  if (!(cfg.max > cfg.min)) throw ValidationError("encoder.max", "max must exceed min");
  if (cfg.buckets < 1) throw ValidationError("encoder.buckets", "must be >= 1");
  if (cfg.active_bits < 1 || cfg.active_bits > cfg.buckets) {
    throw ValidationError("encoder.active_bits", "must satisfy 1 <= w <= buckets");
  }
  if (cfg.active_bits % 2 == 0) throw ValidationError("encoder.active_bits", "must be odd");
}

ScalarEncoder::ScalarEncoder(const ScalarEncoderConfig& cfg) : cfg_(cfg) { validate(cfg_); }

int ScalarEncoder::bucket(double x) const {
  if (!std::isfinite(x)) throw EncodingError("cannot encode non-finite value");
  if (!cfg_.clip_out_of_range && (x < cfg_.min || x > cfg_.max)) {
    throw EncodingError("value outside encoder range");
  }
  const double clamped = std::clamp(x, cfg_.min, cfg_.max);
  const double pos = (clamped - cfg_.min) / (cfg_.max - cfg_.min) * (cfg_.buckets - 1);
  return std::clamp(static_cast<int>(std::lround(pos)), 0, cfg_.buckets - 1);
}

std::vector<std::uint32_t> ScalarEncoder::encode(double x) const {
  const int first = bucket(x);
  std::vector<std::uint32_t> bits(static_cast<std::size_t>(cfg_.active_bits));
  for (int i = 0; i < cfg_.active_bits; ++i) bits[i] = static_cast<std::uint32_t>(first + i);
  return bits;
}

void to_json(nlohmann::json& j, const ScalarEncoderConfig& c) {
  j = {{"min", c.min}, {"max", c.max}, {"buckets", c.buckets},
       {"active_bits", c.active_bits}, {"clip_out_of_range", c.clip_out_of_range}};
}

void from_json(const nlohmann::json& j, ScalarEncoderConfig& c) {
  j.at("min").get_to(c.min);
  j.at("max").get_to(c.max);
  j.at("buckets").get_to(c.buckets);
  j.at("active_bits").get_to(c.active_bits);
  j.at("clip_out_of_range").get_to(c.clip_out_of_range);
}

}  // namespace ridecomfort
