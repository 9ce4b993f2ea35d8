#include "ridecomfort/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

std::uint64_t SeededRng::below(std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double SeededRng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

double SeededRng::normal(double mean, double sd) {
  // Box-Muller, one variate per call.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string SeededRng::state() const {
  std::ostringstream ss;
  ss << seed_ << ' ' << engine_;
  return ss.str();
}

void SeededRng::set_state(const std::string& text) {
  std::istringstream ss(text);
  ss >> seed_ >> engine_;
  if (!ss) throw ParseError(0, "bad rng state");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_string(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ridecomfort
