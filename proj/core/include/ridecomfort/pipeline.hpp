#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ridecomfort/detector_factory.hpp"
#include "ridecomfort/feedback.hpp"
#include "ridecomfort/features.hpp"
#include "ridecomfort/mtl_train.hpp"
#include "ridecomfort/scenario.hpp"
#include "ridecomfort/trip.hpp"

namespace ridecomfort {

struct PipelineConfig {
  DetectorKind detector = DetectorKind::htm;
  DetectorSettings detectors;
  /// HTM input ranges for speed, jerk, congestion.
  std::array<ScalarEncoderConfig, kFeatureCount> encoders = default_encoders();
  SmootherConfig smoother;
  double bootstrap_minutes = 10.0;
  std::uint64_t seed = 1;
  TrainConfig train;
  double query_gap = 0.1;
  std::size_t sobol_samples = 1024;
  std::filesystem::path trips_dir = "trips";
  std::filesystem::path models_dir = "models";
  std::filesystem::path reports_dir = "reports";

  static std::array<ScalarEncoderConfig, kFeatureCount> default_encoders();
};

void validate(const PipelineConfig& cfg);
/// Applies `key = value` lines ('#' comments allowed); unknown keys throw ConfigError.
void apply_config_text(PipelineConfig& cfg, const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& cfg);

/// Windows in the bootstrap prefix for a trip with `sample_window` seconds.
std::size_t bootstrap_windows(double bootstrap_minutes, double sample_window);

/// Feature observations and per-feature detector scores for one trip.
struct TripTraces {
  std::vector<WindowObservation> windows;
  std::array<std::vector<double>, kFeatureCount> scores;  ///< one per window
  std::size_t bootstrap = 0;  ///< windows in the bootstrap prefix
  bool ready = false;         ///< trip extends past the bootstrap

  /// Feature vector for window k (scores as likelihoods).
  FeatureVector feature_vector(std::size_t k) const;
};

double feature_value(const WindowObservation& w, Feature f);

/// Runs one independent detector per feature over the whole trip.
TripTraces detect_trip(const TripRecord& trip, const PipelineConfig& cfg);
TripTraces detect_trip(const TripRecord& trip, const PipelineConfig& cfg, DetectorKind kind,
                       std::size_t bootstrap);

/// Post-bootstrap windows labeled from the trip's comfort labels.
std::vector<LabeledFeature> labeled_features(const TripRecord& trip, const TripTraces& traces);

/// Mean of per-window levels rounded half up, clamped to 1..5.
int trip_rating(const std::vector<int>& levels);

/// Per-feature share of the summed mean likelihoods, in percent. Equal
/// shares when all means are zero.
std::array<double, kFeatureCount> feature_impacts(const TripTraces& traces);

struct TripReport {
  std::string trip_id;
  std::string commuter_id;
  std::size_t first_window = 0;  ///< index of the first predicted window
  std::vector<int> levels;       ///< per post-bootstrap window
  std::vector<IndicatorVector> indicators;
  int rating = 1;
  std::array<double, kFeatureCount> impact{};
  std::vector<FeedbackQuery> queries;
};

/// Predicts comfort for every post-bootstrap window. Throws
/// InsufficientDataError("insufficient trip length") when the trip ends
/// within the bootstrap, and UnregisteredCommuterError for an unknown
/// commuter. Ambiguous windows are offered to `queue`; when the trip has
/// labels, queries are answered from them.
TripReport run_trip(const TripRecord& trip, const TripTraces& traces, const MtlModel& model,
                    const PipelineConfig& cfg, FeedbackQueue* queue = nullptr);

/// Offers every post-bootstrap window of `trip` to `queue`, predicting with
/// the commuter's head or, for a commuter the model has not seen, the
/// population mean. Queries are answered from the trip's labels when it has
/// them. Returns the number of queries logged.
std::size_t collect_feedback(const TripRecord& trip, const TripTraces& traces, const MtlModel& model,
                             const PipelineConfig& cfg, FeedbackQueue& queue);

std::string format_trip_report(const TripReport& report);

/// Split of trip ids into train/validation/test by whole trips.
struct TripSplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

/// Seeded shuffle, then round(0.6 n) train, round(0.2 n) validation, rest test.
TripSplit split_trips(std::vector<std::string> trip_ids, std::uint64_t seed);

/// Trip files (*.trip) in `dir`, sorted by name.
std::vector<std::filesystem::path> list_trip_files(const std::filesystem::path& dir);

}  // namespace ridecomfort
