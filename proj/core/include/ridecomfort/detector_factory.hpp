#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ridecomfort/detector.hpp"
#include "ridecomfort/expose.hpp"
#include "ridecomfort/htm_detector.hpp"
#include "ridecomfort/relative_entropy.hpp"

namespace ridecomfort {

enum class DetectorKind { htm, relative_entropy, expose };

/// Accepts "htm", "re"/"relative_entropy", "expose".
DetectorKind parse_detector_kind(const std::string& name);
const char* detector_kind_name(DetectorKind kind);

struct DetectorSettings {
  HtmConfig htm;
  RelativeEntropyConfig re;
  ExposeConfig expose;
};

/// `encoder` sets the HTM input range; baselines ignore it.
std::unique_ptr<StreamingDetector> make_detector(DetectorKind kind, const DetectorSettings& settings,
                                                 const ScalarEncoderConfig& encoder,
                                                 std::uint64_t seed);

/// Restores any detector from its to_json() dump.
std::unique_ptr<StreamingDetector> load_detector(const nlohmann::json& j);

}  // namespace ridecomfort
