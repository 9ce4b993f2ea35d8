#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ridecomfort/mtl_model.hpp"

namespace ridecomfort {

struct TrainConfig {
  int hidden = 32;
  double learning_rate = 1e-2;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 1;
};

void validate(const TrainConfig& cfg);

/// One labeled window.
struct LabeledFeature {
  std::string commuter_id;
  std::string trip_id;
  int window_index = 0;
  FeatureVector x;
  int level = 1;
};

struct TrainResult {
  std::vector<double> train_loss;       ///< per epoch, after the epoch's updates
  std::vector<double> validation_loss;  ///< per epoch; empty without validation data
  /// Validation commuters with no head (no training data); excluded.
  std::vector<std::string> skipped_commuters;
};

/// Mini-batch SGD on mean cross-entropy, continuing from the model's
/// current parameters. Commuters in `data` without a head are registered
/// with a fresh head first (in order of first appearance). Batches are
/// drawn from a per-epoch shuffle over all commuters.
TrainResult train(MtlModel& model, std::span<const LabeledFeature> data,
                  std::span<const LabeledFeature> validation, const TrainConfig& cfg);

/// Fresh model (input scale fitted on `data`) trained jointly on all commuters.
MtlModel train_mtl(std::span<const LabeledFeature> data, std::span<const LabeledFeature> validation,
                   const TrainConfig& cfg, TrainResult* result = nullptr);

/// Single-task comparator: the same architecture with one head, trained on
/// one commuter's data in isolation. Throws ValidationError when `data`
/// spans several commuters.
MtlModel stl_train(std::span<const LabeledFeature> data, std::span<const LabeledFeature> validation,
                   const TrainConfig& cfg, TrainResult* result = nullptr);

/// Examples for commuters the model knows; others are skipped.
std::vector<Example> to_examples(const MtlModel& model, std::span<const LabeledFeature> data);

}  // namespace ridecomfort
