#include "ridecomfort/temporal_memory.hpp"

#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

constexpr float kPermEpsilon = 1e-6f;

}  // namespace

void validate(const TemporalMemoryConfig& c) {
  if (c.cells_per_column < 1) throw ValidationError("tm.cells_per_column", "must be >= 1");
  if (c.max_synapses_per_segment < 1) {
    throw ValidationError("tm.max_synapses_per_segment", "must be >= 1");
  }
  if (c.max_segments_per_cell < 1) throw ValidationError("tm.max_segments_per_cell", "must be >= 1");
  if (c.activation_threshold < 1 || c.activation_threshold > c.max_synapses_per_segment) {
    throw ValidationError("tm.activation_threshold", "must be in [1, max_synapses_per_segment]");
  }
  if (c.min_threshold < 1 || c.min_threshold > c.max_synapses_per_segment) {
    throw ValidationError("tm.min_threshold", "must be in [1, max_synapses_per_segment]");
  }
  if (c.max_new_synapses < 1 || c.max_new_synapses > c.max_synapses_per_segment) {
    throw ValidationError("tm.max_new_synapses", "must be in [1, max_synapses_per_segment]");
  }
  if (!(c.initial_perm > 0.0 && c.initial_perm <= 1.0)) {
    throw ValidationError("tm.initial_perm", "must be in (0,1]");
  }
  if (!(c.perm_connected > 0.0 && c.perm_connected <= 1.0)) {
    throw ValidationError("tm.perm_connected", "must be in (0,1]");
  }
  if (!(c.perm_inc >= 0.0) || !(c.perm_dec >= 0.0)) {
    throw ValidationError("tm.perm_inc", "increments must be non-negative");
  }
}

TemporalMemory::TemporalMemory(int columns, const TemporalMemoryConfig& cfg, std::uint64_t seed)
    : columns_(columns), cfg_(cfg), rng_(seed) {
  validate(cfg_);
  if (columns < 1) throw ValidationError("tm.columns", "must be >= 1");
  rebuild_derived();
}

std::uint32_t TemporalMemory::column_of(std::uint32_t cell) const {
  return cell / static_cast<std::uint32_t>(cfg_.cells_per_column);
}

void TemporalMemory::rebuild_derived() {
  const auto cells = static_cast<std::size_t>(columns_) * static_cast<std::size_t>(cfg_.cells_per_column);
  cell_segments_.assign(cells, {});
  presyn_index_.assign(cells, {});
  for (std::uint32_t id = 0; id < segments_.size(); ++id) {
    const auto& seg = segments_[id];
    if (!seg.alive) continue;
    cell_segments_[seg.cell].push_back(id);
    for (const auto& syn : seg.synapses) presyn_index_[syn.presyn].push_back(id);
  }
}

std::uint32_t TemporalMemory::create_segment(std::uint32_t cell) {
  while (cell_segments_[cell].size() >= static_cast<std::size_t>(cfg_.max_segments_per_cell)) {
    std::uint32_t lru = cell_segments_[cell].front();
    for (auto id : cell_segments_[cell]) {
      const auto& a = segments_[id];
      const auto& b = segments_[lru];
      if (a.last_used < b.last_used || (a.last_used == b.last_used && id < lru)) lru = id;
    }
    destroy_segment(lru);
  }
  std::uint32_t id;
  if (!free_segments_.empty()) {
    id = free_segments_.back();
    free_segments_.pop_back();
  } else {
    id = static_cast<std::uint32_t>(segments_.size());
    segments_.emplace_back();
  }
  auto& seg = segments_[id];
  seg.cell = cell;
  seg.alive = true;
  seg.last_used = iteration_;
  seg.synapses.clear();
  cell_segments_[cell].push_back(id);
  return id;
}

void TemporalMemory::destroy_segment(std::uint32_t id) {
  auto& seg = segments_[id];
  while (!seg.synapses.empty()) destroy_synapse(id, seg.synapses.size() - 1);
  auto& owned = cell_segments_[seg.cell];
  owned.erase(std::find(owned.begin(), owned.end(), id));
  seg.alive = false;
  free_segments_.push_back(id);
}

void TemporalMemory::destroy_synapse(std::uint32_t id, std::size_t index) {
  auto& seg = segments_[id];
  auto& fed = presyn_index_[seg.synapses[index].presyn];
  auto it = std::find(fed.begin(), fed.end(), id);
  *it = fed.back();
  fed.pop_back();
  seg.synapses.erase(seg.synapses.begin() + static_cast<std::ptrdiff_t>(index));
}

void TemporalMemory::adapt_segment(std::uint32_t id, const std::vector<char>& prev_active) {
  const auto inc = static_cast<float>(cfg_.perm_inc);
  const auto dec = static_cast<float>(cfg_.perm_dec);
  auto& syns = segments_[id].synapses;
  for (std::size_t i = syns.size(); i-- > 0;) {
    float p = syns[i].perm + (prev_active[syns[i].presyn] ? inc : -dec);
    p = std::clamp(p, 0.0f, 1.0f);
    if (p < kPermEpsilon) {
      destroy_synapse(id, i);
    } else {
      syns[i].perm = p;
    }
  }
  if (segments_[id].synapses.empty()) destroy_segment(id);
}

void TemporalMemory::grow_synapses(std::uint32_t id, int count,
                                   const std::vector<std::uint32_t>& candidates) {
  if (count <= 0) return;
  auto& seg = segments_[id];
  std::vector<std::uint32_t> pool;
  pool.reserve(candidates.size());
  for (auto c : candidates) {
    const bool present = std::any_of(seg.synapses.begin(), seg.synapses.end(),
                                     [c](const Synapse& s) { return s.presyn == c; });
    if (!present) pool.push_back(c);
  }
  auto n = std::min<std::size_t>(static_cast<std::size_t>(count), pool.size());
  if (n == 0) return;

  const auto cap = static_cast<std::size_t>(cfg_.max_synapses_per_segment);
  n = std::min(n, cap);
  while (seg.synapses.size() + n > cap) {
    std::size_t weakest = 0;
    for (std::size_t i = 1; i < seg.synapses.size(); ++i) {
      if (seg.synapses[i].perm < seg.synapses[weakest].perm) weakest = i;
    }
    destroy_synapse(id, weakest);
  }

  const auto init = static_cast<float>(cfg_.initial_perm);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng_.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    seg.synapses.push_back({pool[i], init});
    presyn_index_[pool[i]].push_back(id);
  }
}

std::uint32_t TemporalMemory::least_used_cell(std::uint32_t column) {
  const auto cpc = static_cast<std::uint32_t>(cfg_.cells_per_column);
  const std::uint32_t first = column * cpc;
  std::size_t fewest = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint32_t> ties;
  for (std::uint32_t cell = first; cell < first + cpc; ++cell) {
    const auto n = cell_segments_[cell].size();
    if (n < fewest) {
      fewest = n;
      ties.clear();
    }
    if (n == fewest) ties.push_back(cell);
  }
  return ties[static_cast<std::size_t>(rng_.below(ties.size()))];
}

void TemporalMemory::compute(std::span<const std::uint32_t> active_columns, bool learn) {
  if (learn) ++iteration_;
  const auto cpc = static_cast<std::uint32_t>(cfg_.cells_per_column);
  std::vector<char> prev_active(cell_segments_.size(), 0);
  for (auto c : active_cells_) prev_active[c] = 1;
  const std::vector<std::uint32_t> prev_winners = winner_cells_;

  std::vector<std::uint32_t> next_active;
  std::vector<std::uint32_t> next_winners;
  std::size_t ia = 0;
  std::size_t im = 0;
  std::uint32_t last_column = 0;
  bool first = true;
  for (auto column : active_columns) {
    if (column >= static_cast<std::uint32_t>(columns_)) {
      throw ValidationError("tm.column", "active column out of range");
    }
    if (!first && column <= last_column) {
      throw ValidationError("tm.column", "active columns must be sorted and unique");
    }
    first = false;
    last_column = column;

    while (ia < active_segments_.size() && column_of(segments_[active_segments_[ia]].cell) < column) ++ia;
    std::vector<std::uint32_t> col_active;
    while (ia < active_segments_.size() && column_of(segments_[active_segments_[ia]].cell) == column) {
      col_active.push_back(active_segments_[ia++]);
    }
    while (im < matching_segments_.size() && column_of(segments_[matching_segments_[im]].cell) < column) ++im;
    std::vector<std::uint32_t> col_matching;
    while (im < matching_segments_.size() && column_of(segments_[matching_segments_[im]].cell) == column) {
      col_matching.push_back(matching_segments_[im++]);
    }

    if (!col_active.empty()) {
      for (auto id : col_active) {
        const auto cell = segments_[id].cell;
        if (next_active.empty() || next_active.back() != cell) {
          next_active.push_back(cell);
          next_winners.push_back(cell);
        }
        if (learn) {
          const int grow = cfg_.max_new_synapses - num_active_potential_[id];
          adapt_segment(id, prev_active);
          if (segments_[id].alive) grow_synapses(id, grow, prev_winners);
        }
      }
      continue;
    }

    for (std::uint32_t cell = column * cpc; cell < (column + 1) * cpc; ++cell) {
      next_active.push_back(cell);
    }
    if (!col_matching.empty()) {
      std::uint32_t best = col_matching.front();
      for (auto id : col_matching) {
        if (num_active_potential_[id] > num_active_potential_[best]) best = id;
      }
      next_winners.push_back(segments_[best].cell);
      if (learn) {
        const int grow = cfg_.max_new_synapses - num_active_potential_[best];
        adapt_segment(best, prev_active);
        if (segments_[best].alive) grow_synapses(best, grow, prev_winners);
      }
    } else {
      const auto winner = least_used_cell(column);
      next_winners.push_back(winner);
      if (learn && !prev_winners.empty()) {
        const auto id = create_segment(winner);
        grow_synapses(id, std::min<int>(cfg_.max_new_synapses, static_cast<int>(prev_winners.size())),
                      prev_winners);
      }
    }
  }
  std::sort(next_winners.begin(), next_winners.end());
  active_cells_ = std::move(next_active);
  winner_cells_ = std::move(next_winners);
  activate_dendrites(learn);
}

void TemporalMemory::activate_dendrites(bool learn) {
  num_active_connected_.assign(segments_.size(), 0);
  num_active_potential_.assign(segments_.size(), 0);
  const auto connected = static_cast<float>(cfg_.perm_connected) - kPermEpsilon;
  std::vector<std::uint32_t> touched;
  for (auto cell : active_cells_) {
    for (auto id : presyn_index_[cell]) {
      for (const auto& syn : segments_[id].synapses) {
        if (syn.presyn != cell) continue;
        if (num_active_potential_[id]++ == 0) touched.push_back(id);
        if (syn.perm >= connected) ++num_active_connected_[id];
        break;
      }
    }
  }
  active_segments_.clear();
  matching_segments_.clear();
  for (auto id : touched) {
    if (num_active_connected_[id] >= cfg_.activation_threshold) active_segments_.push_back(id);
    if (num_active_potential_[id] >= cfg_.min_threshold) matching_segments_.push_back(id);
  }
  auto by_cell = [this](std::uint32_t a, std::uint32_t b) {
    return segments_[a].cell != segments_[b].cell ? segments_[a].cell < segments_[b].cell : a < b;
  };
  std::sort(active_segments_.begin(), active_segments_.end(), by_cell);
  std::sort(matching_segments_.begin(), matching_segments_.end(), by_cell);
  if (learn) {
    for (auto id : active_segments_) segments_[id].last_used = iteration_;
  }
}

void TemporalMemory::reset() {
  active_cells_.clear();
  winner_cells_.clear();
  active_segments_.clear();
  matching_segments_.clear();
}

std::vector<std::uint32_t> TemporalMemory::predicted_columns() const {
  std::vector<std::uint32_t> out;
  for (auto id : active_segments_) {
    const auto col = column_of(segments_[id].cell);
    if (out.empty() || out.back() != col) out.push_back(col);
  }
  return out;
}

std::size_t TemporalMemory::segment_count() const {
  return segments_.size() - free_segments_.size();
}

std::size_t TemporalMemory::synapse_count() const {
  std::size_t n = 0;
  for (const auto& s : segments_) n += s.synapses.size();
  return n;
}

void to_json(nlohmann::json& j, const TemporalMemoryConfig& c) {
  j = {{"cells_per_column", c.cells_per_column},
       {"activation_threshold", c.activation_threshold},
       {"initial_perm", c.initial_perm},
       {"perm_connected", c.perm_connected},
       {"min_threshold", c.min_threshold},
       {"max_new_synapses", c.max_new_synapses},
       {"perm_inc", c.perm_inc},
       {"perm_dec", c.perm_dec},
       {"max_segments_per_cell", c.max_segments_per_cell},
       {"max_synapses_per_segment", c.max_synapses_per_segment}};
}

void from_json(const nlohmann::json& j, TemporalMemoryConfig& c) {
  j.at("cells_per_column").get_to(c.cells_per_column);
  j.at("activation_threshold").get_to(c.activation_threshold);
  j.at("initial_perm").get_to(c.initial_perm);
  j.at("perm_connected").get_to(c.perm_connected);
  j.at("min_threshold").get_to(c.min_threshold);
  j.at("max_new_synapses").get_to(c.max_new_synapses);
  j.at("perm_inc").get_to(c.perm_inc);
  j.at("perm_dec").get_to(c.perm_dec);
  j.at("max_segments_per_cell").get_to(c.max_segments_per_cell);
  j.at("max_synapses_per_segment").get_to(c.max_synapses_per_segment);
}

nlohmann::json TemporalMemory::to_json() const {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : segments_) {
    nlohmann::json syns = nlohmann::json::array();
    for (const auto& syn : s.synapses) syns.push_back({syn.presyn, syn.perm});
    segs.push_back({{"cell", s.cell}, {"alive", s.alive}, {"last_used", s.last_used}, {"synapses", syns}});
  }
  return {{"columns", columns_},
          {"config", cfg_},
          {"rng", rng_.state()},
          {"iteration", iteration_},
          {"segments", segs},
          {"free_segments", free_segments_},
          {"active_cells", active_cells_},
          {"winner_cells", winner_cells_}};
}

TemporalMemory TemporalMemory::from_json(const nlohmann::json& j) {
  TemporalMemory tm;
  j.at("columns").get_to(tm.columns_);
  j.at("config").get_to(tm.cfg_);
  validate(tm.cfg_);
  tm.rng_.set_state(j.at("rng").get<std::string>());
  j.at("iteration").get_to(tm.iteration_);
  const auto cells = static_cast<std::uint32_t>(tm.columns_ * tm.cfg_.cells_per_column);
  for (const auto& s : j.at("segments")) {
    Segment seg;
    s.at("cell").get_to(seg.cell);
    s.at("alive").get_to(seg.alive);
    s.at("last_used").get_to(seg.last_used);
    for (const auto& syn : s.at("synapses")) {
      Synapse x{syn.at(0).get<std::uint32_t>(), syn.at(1).get<float>()};
      if (x.presyn >= cells) throw ParseError(0, "temporal memory synapse out of range");
      seg.synapses.push_back(x);
    }
    if (seg.cell >= cells) throw ParseError(0, "temporal memory segment cell out of range");
    tm.segments_.push_back(std::move(seg));
  }
  j.at("free_segments").get_to(tm.free_segments_);
  j.at("active_cells").get_to(tm.active_cells_);
  j.at("winner_cells").get_to(tm.winner_cells_);
  tm.rebuild_derived();
  tm.activate_dendrites(false);
  return tm;
}

}  // namespace ridecomfort
