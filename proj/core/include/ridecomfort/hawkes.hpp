#pragma once

#include <vector>

#include "ridecomfort/random.hpp"

namespace ridecomfort {

/// Temporal self-exciting process with intensity
///   lambda(t) = mu + sum_{t_i < t} alpha * exp(-beta * (t - t_i)).
struct TemporalHawkesParams {
  double mu = 0.1;     ///< background rate, events/s
  double alpha = 0.5;  ///< excitation jump, events/s per event
  double beta = 1.0;   ///< decay rate, 1/s

  double branching_ratio() const { return alpha / beta; }
};

/// Spatio-temporal variant: each event excites a Gaussian bump of bandwidth
/// sigma_s (km) around its location; mu is per km^2.
struct SpatioTemporalHawkesParams {
  double mu = 0.01;  ///< events/(s km^2)
  double alpha = 0.5;
  double beta = 1.0;
  double sigma_s = 0.2;  ///< km

  double branching_ratio() const { return alpha / beta; }
};

/// Throws ValidationError unless mu > 0, alpha >= 0, beta > 0, alpha/beta < 1
/// (and sigma_s > 0).
void validate(const TemporalHawkesParams& p);
void validate(const SpatioTemporalHawkesParams& p);

/// Piecewise background multiplier: inside [start, end) the background rate
/// is scaled by `factor`. Overlapping pieces multiply.
struct RateModulation {
  double start = 0.0;
  double end = 0.0;
  double factor = 1.0;
};

/// Axis-aligned region in km.
struct Region {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

struct SpatioTemporalEvent {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  int parent = -1;  ///< index of the triggering event; -1 for background
};

/// Event times in (0, horizon] by Ogata thinning.
std::vector<double> simulate_hawkes(const TemporalHawkesParams& params, double horizon,
                                    SeededRng& rng,
                                    const std::vector<RateModulation>& modulation = {});

/// Events in (0, horizon] x region by thinning; each accepted candidate is
/// attributed to the background or to one parent in proportion to its share
/// of the intensity, then placed uniformly or Gaussian-displaced from the
/// parent. Candidates landing outside the region are rejected.
std::vector<SpatioTemporalEvent> simulate_st_hawkes(
    const SpatioTemporalHawkesParams& params, double horizon, const Region& region,
    SeededRng& rng, const std::vector<RateModulation>& modulation = {});

/// Background multiplier in force at time t.
double modulation_factor(const std::vector<RateModulation>& modulation, double t);

}  // namespace ridecomfort
