#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ridecomfort/random.hpp"

namespace ridecomfort {

struct TemporalMemoryConfig {
  int cells_per_column = 32;
  int activation_threshold = 13;
  double initial_perm = 0.21;
  double perm_connected = 0.5;
  int min_threshold = 10;
  int max_new_synapses = 20;
  double perm_inc = 0.1;
  double perm_dec = 0.1;
  int max_segments_per_cell = 128;
  int max_synapses_per_segment = 32;
};

void validate(const TemporalMemoryConfig& cfg);

/// First-order-free sequence memory over columns. After compute(), the
/// cells with active distal segments form the prediction for the next step.
class TemporalMemory {
 public:
  TemporalMemory(int columns, const TemporalMemoryConfig& cfg, std::uint64_t seed);

  /// Advances one step with the sorted active columns.
  void compute(std::span<const std::uint32_t> active_columns, bool learn);
  /// Forgets the sequence context (active and predictive state), keeps synapses.
  void reset();

  /// Sorted columns containing at least one predictive cell.
  std::vector<std::uint32_t> predicted_columns() const;
  const std::vector<std::uint32_t>& active_cells() const { return active_cells_; }
  const std::vector<std::uint32_t>& winner_cells() const { return winner_cells_; }
  std::size_t segment_count() const;
  std::size_t synapse_count() const;

  int columns() const { return columns_; }
  const TemporalMemoryConfig& config() const { return cfg_; }

  nlohmann::json to_json() const;
  static TemporalMemory from_json(const nlohmann::json& j);

 private:
  struct Synapse {
    std::uint32_t presyn;
    float perm;
  };
  struct Segment {
    std::uint32_t cell = 0;
    bool alive = false;
    std::uint64_t last_used = 0;
    std::vector<Synapse> synapses;
  };

  TemporalMemory() = default;
  std::uint32_t column_of(std::uint32_t cell) const;
  std::uint32_t create_segment(std::uint32_t cell);
  void destroy_segment(std::uint32_t seg);
  void destroy_synapse(std::uint32_t seg, std::size_t index);
  void adapt_segment(std::uint32_t seg, const std::vector<char>& prev_active);
  void grow_synapses(std::uint32_t seg, int count, const std::vector<std::uint32_t>& candidates);
  std::uint32_t least_used_cell(std::uint32_t column);
  void activate_dendrites(bool learn);
  void rebuild_derived();

  int columns_ = 0;
  TemporalMemoryConfig cfg_;
  SeededRng rng_;
  std::uint64_t iteration_ = 0;

  std::vector<Segment> segments_;
  std::vector<std::uint32_t> free_segments_;
  std::vector<std::vector<std::uint32_t>> cell_segments_;  // cell -> segment ids
  std::vector<std::vector<std::uint32_t>> presyn_index_;   // cell -> segments it feeds

  std::vector<std::uint32_t> active_cells_;
  std::vector<std::uint32_t> winner_cells_;
  std::vector<std::uint32_t> active_segments_;    // sorted by (cell, id)
  std::vector<std::uint32_t> matching_segments_;  // sorted by (cell, id)
  std::vector<int> num_active_connected_;
  std::vector<int> num_active_potential_;
};

void to_json(nlohmann::json& j, const TemporalMemoryConfig& c);
void from_json(const nlohmann::json& j, TemporalMemoryConfig& c);

}  // namespace ridecomfort
