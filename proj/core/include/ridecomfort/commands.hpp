#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ridecomfort/pipeline.hpp"
#include "ridecomfort/report.hpp"
#include "ridecomfort/sobol.hpp"

namespace ridecomfort {

/// Renders `count` trips from a scenario file into `out_dir`, trip i seeded
/// from (seed, i). Returns the written paths.
std::vector<std::filesystem::path> cmd_synth(const std::filesystem::path& scenario, std::size_t count,
                                             std::uint64_t seed, const std::filesystem::path& out_dir);

/// Per-window features as CSV.
std::string cmd_extract(const std::filesystem::path& trip, const PipelineConfig& cfg);

/// Runs the configured detector on one trip. Writes a per-window CSV trace
/// to `csv` when given; the report carries per-feature AUC against the
/// trip's ground-truth anomaly flags when available.
KeyValueReport cmd_detect(const std::filesystem::path& trip, const PipelineConfig& cfg, std::string* csv = nullptr);

/// A labeled trip with its detector traces.
struct DatasetTrip {
  TripRecord trip;
  TripTraces traces;
  std::vector<LabeledFeature> features;
};

/// Loads every trip in `dir` and runs the detectors. Throws ValidationError
/// listing trips without labels. Trips shorter than the bootstrap are skipped.
std::vector<DatasetTrip> load_dataset(const std::filesystem::path& dir, const PipelineConfig& cfg,
                                      std::vector<std::string>* skipped = nullptr);

/// Trains on the 60% split (validation on the next 20%) and writes the
/// model to `model_out` plus its loss curve to `model_out` + ".loss.csv".
KeyValueReport cmd_train(const std::filesystem::path& dataset, const PipelineConfig& cfg,
                         const std::filesystem::path& model_out);

/// Evaluates a model on the 20% test split: per-level and macro AUC,
/// Kendall's W of predicted vs. oracle trip ratings, and Sobol total-order
/// indices of the six input features.
KeyValueReport cmd_eval(const std::filesystem::path& dataset, const std::filesystem::path& model,
                        const PipelineConfig& cfg);

/// Per-window comfort predictions for one trip. Queries are appended to the
/// queue file when one is given.
TripReport cmd_run(const std::filesystem::path& trip, const std::filesystem::path& model,
                   const PipelineConfig& cfg, const std::filesystem::path& queue_file = {});

/// Trip rating only (and the oracle rating when the trip carries labels).
KeyValueReport cmd_rate(const std::filesystem::path& trip, const std::filesystem::path& model,
                        const PipelineConfig& cfg);

/// Rating of a trip from its own labels over the post-bootstrap windows.
int oracle_rating(const TripRecord& trip, const TripTraces& traces);

/// Sobol total-order indices of the population prediction over the six
/// inputs (likelihoods on [0,1], T_t and d_t up to the model's scale, zone
/// uniform over 0..3).
SobolResult feature_importance(const MtlModel& model, std::size_t samples, std::uint64_t seed);

}  // namespace ridecomfort
