#include "ridecomfort/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

void check_common(double mu, double alpha, double beta) {
  if (!(mu > 0.0)) throw ValidationError("mu", "background rate must be positive");
  if (!(alpha >= 0.0)) throw ValidationError("alpha", "must be non-negative");
  if (!(beta > 0.0)) throw ValidationError("beta", "must be positive");
  if (!(alpha / beta < 1.0)) {
    throw ValidationError("alpha", "unstable: branching ratio alpha/beta >= 1");
  }
}

double max_modulation(const std::vector<RateModulation>& modulation, double from) {
  // Upper bound on the product of factors active at any time >= from.
  double bound = 1.0;
  for (const auto& m : modulation) {
    if (m.end > from && m.factor > 1.0) bound *= m.factor;
  }
  return bound;
}

}  // namespace

void validate(const TemporalHawkesParams& p) { check_common(p.mu, p.alpha, p.beta); }

void validate(const SpatioTemporalHawkesParams& p) {
  check_common(p.mu, p.alpha, p.beta);
  if (!(p.sigma_s > 0.0)) throw ValidationError("sigma_s", "must be positive");
}

double modulation_factor(const std::vector<RateModulation>& modulation, double t) {
  double f = 1.0;
  for (const auto& m : modulation) {
    if (t >= m.start && t < m.end) f *= m.factor;
  }
  return f;
}

std::vector<double> simulate_hawkes(const TemporalHawkesParams& params, double horizon,
                                    SeededRng& rng,
                                    const std::vector<RateModulation>& modulation) {
  validate(params);
  std::vector<double> events;
  if (!(horizon > 0.0)) return events;

  double t = 0.0;
  double excitation = 0.0;  // sum of alpha*exp(-beta (t - t_i)) at time t
  while (true) {
    const double bound = params.mu * max_modulation(modulation, t) + excitation;
    const double wait = rng.exponential(bound);
    const double next = t + wait;
    if (next > horizon) break;
    excitation *= std::exp(-params.beta * wait);
    t = next;
    const double lambda = params.mu * modulation_factor(modulation, t) + excitation;
    if (rng.uniform() * bound <= lambda) {
      events.push_back(t);
      excitation += params.alpha;
    }
  }
  return events;
}

std::vector<SpatioTemporalEvent> simulate_st_hawkes(
    const SpatioTemporalHawkesParams& params, double horizon, const Region& region,
    SeededRng& rng, const std::vector<RateModulation>& modulation) {
  validate(params);
  if (!(region.x1 > region.x0) || !(region.y1 > region.y0)) {
    throw ValidationError("region", "empty region");
  }
  std::vector<SpatioTemporalEvent> events;
  if (!(horizon > 0.0)) return events;

  const double area = region.area();
  // Current excitation contributed by each event; entries before `live` have
  // decayed below double resolution and are skipped.
  std::vector<double> weight;
  std::size_t live = 0;
  double t = 0.0;
  double excitation = 0.0;
  while (true) {
    const double bound = params.mu * area * max_modulation(modulation, t) + excitation;
    const double wait = rng.exponential(bound);
    const double next = t + wait;
    if (next > horizon) break;
    const double decay = std::exp(-params.beta * wait);
    excitation *= decay;
    for (std::size_t i = live; i < weight.size(); ++i) weight[i] *= decay;
    while (live < weight.size() && weight[live] < 1e-18 * params.alpha) ++live;
    t = next;
    const double background = params.mu * area * modulation_factor(modulation, t);
    const double total = background + excitation;
    const double u = rng.uniform() * bound;
    if (u > total) continue;

    SpatioTemporalEvent ev;
    ev.t = t;
    if (u < background) {
      ev.x = rng.uniform(region.x0, region.x1);
      ev.y = rng.uniform(region.y0, region.y1);
    } else {
      double pick = u - background;
      std::size_t parent = weight.size() - 1;
      for (std::size_t i = live; i < weight.size(); ++i) {
        if (pick < weight[i]) {
          parent = i;
          break;
        }
        pick -= weight[i];
      }
      ev.parent = static_cast<int>(parent);
      ev.x = events[parent].x + rng.normal(0.0, params.sigma_s);
      ev.y = events[parent].y + rng.normal(0.0, params.sigma_s);
      // Offspring mass falling outside the region is thinned away.
      if (!region.contains(ev.x, ev.y)) continue;
    }
    events.push_back(ev);
    weight.push_back(params.alpha);
    excitation += params.alpha;
  }
  return events;
}

}  // namespace ridecomfort
