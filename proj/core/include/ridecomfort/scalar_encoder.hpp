#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ridecomfort {

struct ScalarEncoderConfig {
  double min = 0.0;
  double max = 1.0;
  int buckets = 130;
  int active_bits = 21;  ///< w, odd
  bool clip_out_of_range = true;

  int width() const { return buckets + active_bits - 1; }
};

void validate(const ScalarEncoderConfig& cfg);

/// Maps a scalar to `active_bits` contiguous on-bits whose offset is the
/// bucket of clamp(x, min, max). Nearby values share bits.
class ScalarEncoder {
 public:
  explicit ScalarEncoder(const ScalarEncoderConfig& cfg);

  /// Sorted indices of active bits. Throws EncodingError for non-finite x,
  /// or for out-of-range x when clipping is disabled.
  std::vector<std::uint32_t> encode(double x) const;
  int bucket(double x) const;

  const ScalarEncoderConfig& config() const { return cfg_; }

 private:
  ScalarEncoderConfig cfg_;
};

void to_json(nlohmann::json& j, const ScalarEncoderConfig& c);
void from_json(const nlohmann::json& j, ScalarEncoderConfig& c);

}  // namespace ridecomfort
