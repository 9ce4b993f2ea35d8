#include "ridecomfort/detector_factory.hpp"

#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

DetectorKind parse_detector_kind(const std::string& name) {
  if (name == "htm") return DetectorKind::htm;
  if (name == "re" || name == "relative_entropy") return DetectorKind::relative_entropy;
  if (name == "expose") return DetectorKind::expose;
  throw ConfigError("unknown detector '" + name + "' (expected htm, re, expose)");
}

const char* detector_kind_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::htm: return "htm";
    case DetectorKind::relative_entropy: return "re";
    case DetectorKind::expose: return "expose";
  }
  return "?";
}

std::unique_ptr<StreamingDetector> make_detector(DetectorKind kind, const DetectorSettings& settings,
                                                 const ScalarEncoderConfig& encoder,
                                                 std::uint64_t seed) {
  switch (kind) {
    case DetectorKind::htm: {
      HtmConfig cfg = settings.htm;
      cfg.encoder = encoder;
      return std::make_unique<HtmDetector>(cfg, seed);
    }
    case DetectorKind::relative_entropy:
      return std::make_unique<RelativeEntropyDetector>(settings.re);
    case DetectorKind::expose:
      return std::make_unique<ExposeDetector>(settings.expose);
  }
  throw ConfigError("unknown detector kind");
}

std::unique_ptr<StreamingDetector> load_detector(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "htm") return std::make_unique<HtmDetector>(HtmDetector::from_json(j));
  if (kind == "re") return std::make_unique<RelativeEntropyDetector>(RelativeEntropyDetector::from_json(j));
  if (kind == "expose") return std::make_unique<ExposeDetector>(ExposeDetector::from_json(j));
  throw ParseError(0, "unknown detector kind '" + kind + "'");
}

}  // namespace ridecomfort
