#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace ridecomfort {

/// Project-wide deterministic generator: std::mt19937_64, whose output
/// sequence is fixed by the standard. Distributions are implemented here
/// rather than with <random> distributions, whose algorithms vary between
/// standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  double exponential(double rate);
  double normal(double mean = 0.0, double sd = 1.0);

  /// Engine state as text; restoring it reproduces the remaining stream.
  std::string state() const;
  void set_state(const std::string& text);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
/// FNV-1a of `text`, for seeding from identifiers.
std::uint64_t hash_string(std::string_view text);

}  // namespace ridecomfort
