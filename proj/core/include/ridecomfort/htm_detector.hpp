#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ridecomfort/anomaly_likelihood.hpp"
#include "ridecomfort/detector.hpp"
#include "ridecomfort/scalar_encoder.hpp"
#include "ridecomfort/spatial_pooler.hpp"
#include "ridecomfort/temporal_memory.hpp"

namespace ridecomfort {

struct HtmConfig {
  ScalarEncoderConfig encoder;
  SpatialPoolerConfig pooler;
  TemporalMemoryConfig memory;
  AnomalyLikelihoodConfig likelihood;
  bool learn = true;
};

void validate(const HtmConfig& cfg);

struct HtmStep {
  double raw = 0.0;         ///< 1 - |active ∩ predicted| / |active|
  double likelihood = 0.0;  ///< discomfort likelihood
  bool bootstrap = false;   ///< no prediction existed (first step)
};

/// Raw prediction error of active columns against predicted columns; both
/// sorted. An empty active set scores 0.
double raw_anomaly_score(const std::vector<std::uint32_t>& active,
                         const std::vector<std::uint32_t>& predicted);

/// Encoder, pooler, temporal memory, and likelihood for one feature stream.
/// step() returns the likelihood.
class HtmDetector final : public StreamingDetector {
 public:
  HtmDetector(const HtmConfig& cfg, std::uint64_t seed);

  std::string kind() const override { return "htm"; }
  double step(double x) override;
  double score() const override { return last_.likelihood; }
  std::size_t steps() const override { return steps_; }
  nlohmann::json to_json() const override;
  static HtmDetector from_json(const nlohmann::json& j);

  HtmStep detect(double x);
  const HtmStep& last() const { return last_; }
  const HtmConfig& config() const { return cfg_; }
  void set_learning(bool on) { cfg_.learn = on; }
  const TemporalMemory& memory() const { return memory_; }

  void save(const std::filesystem::path& path) const;
  static HtmDetector load(const std::filesystem::path& path);

 private:
  HtmDetector(const HtmConfig& cfg, ScalarEncoder enc, SpatialPooler sp, TemporalMemory tm,
              AnomalyLikelihoodState lk);

  HtmConfig cfg_;
  ScalarEncoder encoder_;
  SpatialPooler pooler_;
  TemporalMemory memory_;
  AnomalyLikelihoodState likelihood_;
  std::vector<std::uint32_t> predicted_;
  std::size_t steps_ = 0;
  HtmStep last_;
};

void to_json(nlohmann::json& j, const HtmConfig& c);
void from_json(const nlohmann::json& j, HtmConfig& c);

}  // namespace ridecomfort
