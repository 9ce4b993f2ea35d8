#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ridecomfort {

struct SpatialPoolerConfig {
  int columns = 2048;
  double potential_fraction = 0.8;
  double perm_connected = 0.2;
  double perm_inc = 0.03;
  double perm_dec = 0.015;
  double sparsity = 0.02;  ///< fraction of columns active per step

  int active_columns() const;
};

void validate(const SpatialPoolerConfig& cfg);

/// Global-inhibition spatial pooler without boosting. Each column samples a
/// fixed potential pool of inputs at construction; the columns with the
/// highest connected overlap win.
class SpatialPooler {
 public:
  SpatialPooler(int input_width, const SpatialPoolerConfig& cfg, std::uint64_t seed);

  /// Sorted indices of winning columns for the sorted input bits.
  std::vector<std::uint32_t> compute(std::span<const std::uint32_t> active_inputs, bool learn);

  int input_width() const { return input_width_; }
  const SpatialPoolerConfig& config() const { return cfg_; }

  nlohmann::json to_json() const;
  static SpatialPooler from_json(const nlohmann::json& j);

 private:
  SpatialPooler() = default;
  void build_input_map();

  int input_width_ = 0;
  SpatialPoolerConfig cfg_;
  std::vector<std::vector<std::uint32_t>> potential_;  // per column, input index
  std::vector<std::vector<float>> permanence_;         // aligned with potential_
  std::vector<float> tie_break_;                       // per column, in [0, 0.5)
  // Derived: for each input bit, (column, slot) pairs that sample it.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> input_map_;
  std::vector<int> overlap_;
  std::vector<char> input_active_;
};

void to_json(nlohmann::json& j, const SpatialPoolerConfig& c);
void from_json(const nlohmann::json& j, SpatialPoolerConfig& c);

}  // namespace ridecomfort
