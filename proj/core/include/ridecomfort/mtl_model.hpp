#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ridecomfort/trip.hpp"

namespace ridecomfort {

/// Network input: three likelihoods, scaled T_t and d_t, zone one-hot.
inline constexpr int kModelInputs = 9;
using ModelInput = std::array<double, kModelInputs>;

/// Divisors for T_t and d_t, taken from the training data maxima.
struct InputScale {
  double travel_time_max = 1.0;
  double distance_max = 1.0;
};

InputScale fit_input_scale(std::span<const FeatureVector> features);
ModelInput model_input(const FeatureVector& fv, const InputScale& scale);

/// A training example bound to a head.
struct Example {
  std::size_t head = 0;
  ModelInput input{};
  int level = 1;  ///< 1..5
};

/// Dense layer, weights row-major [out][in].
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  std::size_t size() const { return weight.size() + bias.size(); }
};

/// One shared ReLU layer feeding a softmax head per commuter.
class MtlModel {
 public:
  MtlModel(int hidden, std::uint64_t seed, const InputScale& scale = {});

  /// Head index for `commuter_id`, creating a freshly initialized head if
  /// the commuter is new.
  std::size_t register_commuter(const std::string& commuter_id);
  std::optional<std::size_t> head_index(const std::string& commuter_id) const;
  bool has_commuter(const std::string& commuter_id) const { return head_index(commuter_id).has_value(); }
  /// Commuter ids in registration order; position i owns head i.
  const std::vector<std::string>& commuters() const { return commuters_; }
  std::size_t head_count() const { return heads_.size(); }

  /// Throws UnregisteredCommuterError for an unknown commuter.
  IndicatorVector forward(const std::string& commuter_id, const FeatureVector& fv) const;
  IndicatorVector forward_head(std::size_t head, const ModelInput& x) const;
  /// Mean of all heads' indicator vectors; used for commuters without a head.
  IndicatorVector forward_population(const FeatureVector& fv) const;
  /// forward() when the commuter has a head, else forward_population().
  IndicatorVector forward_or_population(const std::string& commuter_id, const FeatureVector& fv) const;

  /// Mean cross-entropy over `batch`.
  double loss(std::span<const Example> batch) const;
  /// Mean cross-entropy and its gradient, laid out like parameters().
  double loss_and_gradient(std::span<const Example> batch, std::vector<double>& gradient) const;

  /// Shared layer, then each head in order; weights before biases.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);
  std::size_t parameter_count() const;

  int hidden() const { return shared_.out; }
  std::uint64_t seed() const { return seed_; }
  const InputScale& scale() const { return scale_; }
  const DenseLayer& shared() const { return shared_; }
  const DenseLayer& head(std::size_t i) const { return heads_.at(i); }
  DenseLayer& shared() { return shared_; }
  DenseLayer& head(std::size_t i) { return heads_.at(i); }

  nlohmann::json to_json() const;
  static MtlModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static MtlModel load(const std::filesystem::path& path);

 private:
  MtlModel() = default;
  void hidden_activation(const ModelInput& x, std::vector<double>& pre, std::vector<double>& out) const;
  void head_logits(std::size_t head, const std::vector<double>& h, std::array<double, kComfortLevels>& z) const;

  std::uint64_t seed_ = 0;
  InputScale scale_;
  DenseLayer shared_;
  std::vector<DenseLayer> heads_;
  std::vector<std::string> commuters_;
  std::map<std::string, std::size_t> registry_;
};

/// Numerically stable softmax.
std::array<double, kComfortLevels> softmax(const std::array<double, kComfortLevels>& z);

}  // namespace ridecomfort
