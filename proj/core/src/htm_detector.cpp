#include "ridecomfort/htm_detector.hpp"

#include <algorithm>
#include <iterator>

#include <nlohmann/json.hpp>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/random.hpp"

namespace ridecomfort {

namespace {

constexpr int kCheckpointVersion = 1;

}  // namespace

void validate(const HtmConfig& c) {
  validate(c.encoder);
  validate(c.pooler);
  validate(c.memory);
  validate(c.likelihood);
}

double raw_anomaly_score(const std::vector<std::uint32_t>& active,
                         const std::vector<std::uint32_t>& predicted) {
  if (active.empty()) return 0.0;
  std::vector<std::uint32_t> both;
  std::set_intersection(active.begin(), active.end(), predicted.begin(), predicted.end(),
                        std::back_inserter(both));
  return 1.0 - static_cast<double>(both.size()) / static_cast<double>(active.size());
}

HtmDetector::HtmDetector(const HtmConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      encoder_(cfg.encoder),
      pooler_(cfg.encoder.width(), cfg.pooler, mix_seed(seed, 1)),
      memory_(cfg.pooler.columns, cfg.memory, mix_seed(seed, 2)),
      likelihood_(cfg.likelihood) {
  validate(cfg_);
}

HtmDetector::HtmDetector(const HtmConfig& cfg, ScalarEncoder enc, SpatialPooler sp,
                         TemporalMemory tm, AnomalyLikelihoodState lk)
    : cfg_(cfg),
      encoder_(std::move(enc)),
      pooler_(std::move(sp)),
      memory_(std::move(tm)),
      likelihood_(std::move(lk)) {}

HtmStep HtmDetector::detect(double x) {
  const auto bits = encoder_.encode(x);
  const auto active = pooler_.compute(bits, cfg_.learn);
  HtmStep out;
  if (steps_ == 0) {
    out.raw = 1.0;
    out.bootstrap = true;
  } else {
    out.raw = raw_anomaly_score(active, predicted_);
  }
  memory_.compute(active, cfg_.learn);
  predicted_ = memory_.predicted_columns();
  out.likelihood = likelihood_.update(out.raw);
  ++steps_;
  last_ = out;
  return out;
}

double HtmDetector::step(double x) { return detect(x).likelihood; }

void to_json(nlohmann::json& j, const HtmConfig& c) {
  j = {{"encoder", c.encoder}, {"pooler", c.pooler}, {"memory", c.memory}, {"learn", c.learn}};
  j["likelihood"] = {{"window", c.likelihood.window},
                     {"short_window", c.likelihood.short_window},
                     {"sd_floor", c.likelihood.sd_floor}};
}

void from_json(const nlohmann::json& j, HtmConfig& c) {
  j.at("encoder").get_to(c.encoder);
  j.at("pooler").get_to(c.pooler);
  j.at("memory").get_to(c.memory);
  j.at("learn").get_to(c.learn);
  const auto& l = j.at("likelihood");
  l.at("window").get_to(c.likelihood.window);
  l.at("short_window").get_to(c.likelihood.short_window);
  l.at("sd_floor").get_to(c.likelihood.sd_floor);
}

nlohmann::json HtmDetector::to_json() const {
  return {{"kind", "htm"},
          {"version", kCheckpointVersion},
          {"config", cfg_},
          {"pooler", pooler_.to_json()},
          {"memory", memory_.to_json()},
          {"likelihood", likelihood_.to_json()},
          {"predicted", predicted_},
          {"steps", steps_},
          {"last", {last_.raw, last_.likelihood, last_.bootstrap}}};
}

HtmDetector HtmDetector::from_json(const nlohmann::json& j) {
  if (j.at("kind") != "htm") throw ParseError(0, "not an htm checkpoint");
  if (j.at("version") != kCheckpointVersion) throw ParseError(0, "unsupported checkpoint version");
  auto cfg = j.at("config").get<HtmConfig>();
  validate(cfg);
  HtmDetector d(cfg, ScalarEncoder(cfg.encoder), SpatialPooler::from_json(j.at("pooler")),
                TemporalMemory::from_json(j.at("memory")),
                AnomalyLikelihoodState::from_json(j.at("likelihood")));
  j.at("predicted").get_to(d.predicted_);
  j.at("steps").get_to(d.steps_);
  const auto& last = j.at("last");
  d.last_ = {last.at(0).get<double>(), last.at(1).get<double>(), last.at(2).get<bool>()};
  return d;
}

void HtmDetector::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_json().dump() + "\n");
}

HtmDetector HtmDetector::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

}  // namespace ridecomfort
