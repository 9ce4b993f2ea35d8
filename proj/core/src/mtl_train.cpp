#include "ridecomfort/mtl_train.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ridecomfort/error.hpp"
#include "ridecomfort/random.hpp"

namespace ridecomfort {

void validate(const TrainConfig& c) {
  if (c.hidden < 1) throw ValidationError("hidden", "must be >= 1");
  if (!(c.learning_rate > 0.0)) throw ValidationError("learning_rate", "must be positive");
  if (c.epochs < 0) throw ValidationError("epochs", "must be >= 0");
  if (c.batch_size < 1) throw ValidationError("batch_size", "must be >= 1");
}

std::vector<Example> to_examples(const MtlModel& model, std::span<const LabeledFeature> data) {
  std::vector<Example> out;
  out.reserve(data.size());
  for (const auto& d : data) {
    const auto head = model.head_index(d.commuter_id);
    if (!head) continue;
    if (d.level < 1 || d.level > kComfortLevels) throw ValidationError("level", "expected 1..5");
    out.push_back({*head, model_input(d.x, model.scale()), d.level});
  }
  return out;
}

TrainResult train(MtlModel& model, std::span<const LabeledFeature> data,
                  std::span<const LabeledFeature> validation, const TrainConfig& cfg) {
  validate(cfg);
  for (const auto& d : data) model.register_commuter(d.commuter_id);
  const auto examples = to_examples(model, data);
  const auto held_out = to_examples(model, validation);

  TrainResult result;
  std::set<std::string> skipped;
  for (const auto& v : validation) {
    if (!model.has_commuter(v.commuter_id)) skipped.insert(v.commuter_id);
  }
  result.skipped_commuters.assign(skipped.begin(), skipped.end());
  if (examples.empty()) return result;

  SeededRng rng(mix_seed(cfg.seed, 0x7a11));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  auto params = model.parameters();
  std::vector<double> grad;
  std::vector<Example> batch;
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }
    for (std::size_t start = 0; start < order.size(); start += bs) {
      batch.clear();
      for (std::size_t k = start; k < std::min(order.size(), start + bs); ++k) {
        batch.push_back(examples[order[k]]);
      }
      model.loss_and_gradient(batch, grad);
      for (std::size_t p = 0; p < params.size(); ++p) params[p] -= cfg.learning_rate * grad[p];
      model.set_parameters(params);
    }
    result.train_loss.push_back(model.loss(examples));
    if (!held_out.empty()) result.validation_loss.push_back(model.loss(held_out));
  }
  return result;
}

MtlModel train_mtl(std::span<const LabeledFeature> data, std::span<const LabeledFeature> validation,
                   const TrainConfig& cfg, TrainResult* result) {
  validate(cfg);
  std::vector<FeatureVector> xs;
  xs.reserve(data.size());
  for (const auto& d : data) xs.push_back(d.x);
  MtlModel model(cfg.hidden, cfg.seed, fit_input_scale(xs));
  auto r = train(model, data, validation, cfg);
  if (result) *result = std::move(r);
  return model;
}

MtlModel stl_train(std::span<const LabeledFeature> data, std::span<const LabeledFeature> validation,
                   const TrainConfig& cfg, TrainResult* result) {
  for (const auto& d : data) {
    if (d.commuter_id != data.front().commuter_id) {
      throw ValidationError("commuter_id", "single-task training takes one commuter's data");
    }
  }
  return train_mtl(data, validation, cfg, result);
}

}  // namespace ridecomfort
