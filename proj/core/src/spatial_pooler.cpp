#include "ridecomfort/spatial_pooler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"
#include "ridecomfort/random.hpp"

namespace ridecomfort {

int SpatialPoolerConfig::active_columns() const {
  return static_cast<int>(std::lround(sparsity * columns));
}

void validate(const SpatialPoolerConfig& c) {
  if (c.columns < 1) throw ValidationError("sp.columns", "must be >= 1");
  if (!(c.potential_fraction > 0.0 && c.potential_fraction <= 1.0)) {
    throw ValidationError("sp.potential_fraction", "must be in (0,1]");
  }
  if (!(c.perm_connected > 0.0 && c.perm_connected < 1.0)) {
    throw ValidationError("sp.perm_connected", "must be in (0,1)");
  }
  if (!(c.sparsity > 0.0 && c.sparsity < 1.0)) throw ValidationError("sp.sparsity", "must be in (0,1)");
  if (c.active_columns() < 1) throw ValidationError("sp.sparsity", "round(sparsity*columns) < 1");
  if (!(c.perm_inc >= 0.0) || !(c.perm_dec >= 0.0)) {
    throw ValidationError("sp.perm_inc", "increments must be non-negative");
  }
}

SpatialPooler::SpatialPooler(int input_width, const SpatialPoolerConfig& cfg, std::uint64_t seed)
    : input_width_(input_width), cfg_(cfg) {
  validate(cfg_);
  if (input_width < 1) throw ValidationError("sp.input_width", "must be >= 1");
  SeededRng rng(seed);
  const auto pool = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(cfg_.potential_fraction * input_width)));
  const auto columns = static_cast<std::size_t>(cfg_.columns);
  potential_.resize(columns);
  permanence_.resize(columns);
  tie_break_.resize(columns);

  std::vector<std::uint32_t> all(static_cast<std::size_t>(input_width));
  std::iota(all.begin(), all.end(), 0u);
  for (std::size_t c = 0; c < columns; ++c) {
    // Partial Fisher-Yates for the potential pool.
    for (std::size_t i = 0; i < pool; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(all.size() - i));
      std::swap(all[i], all[j]);
    }
    potential_[c].assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(pool));
    std::sort(potential_[c].begin(), potential_[c].end());
    permanence_[c].resize(pool);
    for (auto& p : permanence_[c]) {
      p = static_cast<float>(
          std::clamp(cfg_.perm_connected + rng.uniform(-0.1, 0.1), 0.0, 1.0));
    }
    tie_break_[c] = static_cast<float>(rng.uniform(0.0, 0.5));
  }
  build_input_map();
}

void SpatialPooler::build_input_map() {
  input_map_.assign(static_cast<std::size_t>(input_width_), {});
  for (std::size_t c = 0; c < potential_.size(); ++c) {
    for (std::size_t s = 0; s < potential_[c].size(); ++s) {
      input_map_[potential_[c][s]].emplace_back(static_cast<std::uint32_t>(c),
                                                static_cast<std::uint32_t>(s));
    }
  }
  overlap_.assign(potential_.size(), 0);
  input_active_.assign(static_cast<std::size_t>(input_width_), 0);
}

std::vector<std::uint32_t> SpatialPooler::compute(std::span<const std::uint32_t> active_inputs,
                                                  bool learn) {
  std::fill(overlap_.begin(), overlap_.end(), 0);
  const auto connected = static_cast<float>(cfg_.perm_connected);
  for (auto in : active_inputs) {
    if (in >= input_map_.size()) throw ValidationError("sp.input", "input bit out of range");
    for (const auto& [c, s] : input_map_[in]) {
      if (permanence_[c][s] >= connected) ++overlap_[c];
    }
  }

  std::vector<std::uint32_t> candidates;
  for (std::uint32_t c = 0; c < overlap_.size(); ++c) {
    if (overlap_[c] > 0) candidates.push_back(c);
  }
  const auto k = std::min<std::size_t>(candidates.size(),
                                       static_cast<std::size_t>(cfg_.active_columns()));
  auto score = [&](std::uint32_t c) { return static_cast<float>(overlap_[c]) + tie_break_[c]; };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
                      const float sa = score(a);
                      const float sb = score(b);
                      return sa != sb ? sa > sb : a < b;
                    });
  candidates.resize(k);
  std::sort(candidates.begin(), candidates.end());

  if (learn) {
    for (auto in : active_inputs) input_active_[in] = 1;
    const auto inc = static_cast<float>(cfg_.perm_inc);
    const auto dec = static_cast<float>(cfg_.perm_dec);
    for (auto c : candidates) {
      auto& perms = permanence_[c];
      const auto& pot = potential_[c];
      for (std::size_t s = 0; s < pot.size(); ++s) {
        float p = perms[s] + (input_active_[pot[s]] ? inc : -dec);
        perms[s] = std::clamp(p, 0.0f, 1.0f);
      }
    }
    for (auto in : active_inputs) input_active_[in] = 0;
  }
  return candidates;
}

void to_json(nlohmann::json& j, const SpatialPoolerConfig& c) {
  j = {{"columns", c.columns},        {"potential_fraction", c.potential_fraction},
       {"perm_connected", c.perm_connected}, {"perm_inc", c.perm_inc},
       {"perm_dec", c.perm_dec},      {"sparsity", c.sparsity}};
}

void from_json(const nlohmann::json& j, SpatialPoolerConfig& c) {
  j.at("columns").get_to(c.columns);
  j.at("potential_fraction").get_to(c.potential_fraction);
  j.at("perm_connected").get_to(c.perm_connected);
  j.at("perm_inc").get_to(c.perm_inc);
  j.at("perm_dec").get_to(c.perm_dec);
  j.at("sparsity").get_to(c.sparsity);
}

nlohmann::json SpatialPooler::to_json() const {
  return {{"input_width", input_width_},
          {"config", cfg_},
          {"potential", potential_},
          {"permanence", permanence_},
          {"tie_break", tie_break_}};
}

SpatialPooler SpatialPooler::from_json(const nlohmann::json& j) {
  SpatialPooler sp;
  j.at("input_width").get_to(sp.input_width_);
  j.at("config").get_to(sp.cfg_);
  j.at("potential").get_to(sp.potential_);
  j.at("permanence").get_to(sp.permanence_);
  j.at("tie_break").get_to(sp.tie_break_);
  validate(sp.cfg_);
  if (sp.potential_.size() != static_cast<std::size_t>(sp.cfg_.columns) ||
      sp.permanence_.size() != sp.potential_.size() ||
      sp.tie_break_.size() != sp.potential_.size()) {
    throw ParseError(0, "spatial pooler checkpoint is inconsistent");
  }
  sp.build_input_map();
  return sp;
}

}  // namespace ridecomfort
