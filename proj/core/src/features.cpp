#include "ridecomfort/features.hpp"

#include <algorithm>
#include <cmath>

#include "ridecomfort/error.hpp"
#include "ridecomfort/geo.hpp"

namespace ridecomfort {

std::vector<SensorSample> smooth(std::span<const SensorSample> stream,
                                 const SmootherConfig& cfg) {
  if (cfg.width < 1 || cfg.width % 2 == 0) {
    throw ConfigError("smoother width must be odd and >= 1");
  }
  std::vector<SensorSample> out(stream.begin(), stream.end());
  if (cfg.width == 1) return out;
  const auto half = static_cast<std::ptrdiff_t>(cfg.width / 2);
  const auto n = static_cast<std::ptrdiff_t>(stream.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    double sum = 0.0;
    for (auto k = lo; k <= hi; ++k) sum += stream[k].accel_y;
    out[i].accel_y = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double jerk(std::span<const SensorSample> window) {
  if (window.size() < 2) throw InsufficientDataError("jerk needs at least two samples");
  const double n = static_cast<double>(window.size());
  double mean_t = 0.0;
  double mean_a = 0.0;
  for (const auto& s : window) {
    mean_t += s.t;
    mean_a += s.accel_y;
  }
  mean_t /= n;
  mean_a /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& s : window) {
    const double dt = s.t - mean_t;
    sxy += dt * (s.accel_y - mean_a);
    sxx += dt * dt;
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("jerk needs distinct timestamps");
  return sxy / sxx;
}

int CongestionTracker::level_for_cycle(double t_sm) {
  if (t_sm >= kHighCycle) return 2;
  if (t_sm >= kMediumCycle) return 1;
  return 0;
}

double CongestionTracker::effective_speed(const SensorSample& sample) const {
  if (sample.speed) return *sample.speed;
  if (!prev_ || !(sample.t > prev_->t)) return 0.0;
  return haversine_km(prev_->lat, prev_->lon, sample.lat, sample.lon) * 1000.0 /
         (sample.t - prev_->t);
}

int CongestionTracker::update(const SensorSample& sample) {
  const double v = effective_speed(sample);
  const bool below = v < kStopSpeed;
  if (below != stopped_) {
    if (!run_start_) run_start_ = sample.t;
    if (sample.t - *run_start_ >= kHold) {
      if (!stopped_) {
        const double stop_start = *run_start_;
        if (last_stop_start_) level_ = level_for_cycle(stop_start - *last_stop_start_);
        last_stop_start_ = stop_start;
      }
      stopped_ = !stopped_;
      run_start_.reset();
    }
  } else {
    run_start_.reset();
  }
  prev_ = sample;
  return level_;
}

int congestion(CongestionTracker& state, const SensorSample& sample) {
  return state.update(sample);
}

int time_zone(const ClockTime& start_clock, double elapsed_s) {
  double sec = std::fmod(start_clock.seconds_of_day() + elapsed_s, 86400.0);
  if (sec < 0.0) sec += 86400.0;
  const double hour = sec / 3600.0;
  if (hour >= 6.0 && hour < 10.0) return 0;
  if (hour >= 10.0 && hour < 16.0) return 1;
  if (hour >= 16.0 && hour < 22.0) return 2;
  return 3;
}

std::vector<WindowObservation> windows(const TripRecord& trip, const SmootherConfig& smoother) {
  std::vector<WindowObservation> out;
  const auto& samples = trip.samples;
  if (samples.empty()) return out;

  const double w = trip.meta.sample_window;
  const auto smoothed = smooth(samples, smoother);
  const auto count = static_cast<std::size_t>(std::floor(samples.back().t / w)) + 1;

  // Cumulative path length at each sample.
  std::vector<double> cum(samples.size(), 0.0);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    cum[i] = cum[i - 1] + haversine_km(samples[i - 1].lat, samples[i - 1].lon,
                                       samples[i].lat, samples[i].lon);
  }
  auto distance_at = [&](double t) {
    // Linear interpolation inside the segment straddling t; no extrapolation.
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const SensorSample& s) { return v < s.t; });
    if (it == samples.begin()) return 0.0;
    const auto i = static_cast<std::size_t>(it - samples.begin()) - 1;
    if (i + 1 >= samples.size()) return cum[i];
    const double frac = (t - samples[i].t) / (samples[i + 1].t - samples[i].t);
    return cum[i] + frac * (cum[i + 1] - cum[i]);
  };

  CongestionTracker tracker;
  double last_speed = 0.0;
  double last_jerk = 0.0;
  std::size_t begin = 0;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double lo = static_cast<double>(k) * w;
    const double hi = lo + w;
    std::size_t end = begin;
    while (end < samples.size() && samples[end].t < hi) ++end;

    WindowObservation obs;
    obs.window_index = static_cast<int>(k);
    obs.t_mid = lo + 0.5 * w;
    obs.travel_time = obs.t_mid;
    obs.distance = distance_at(obs.t_mid);
    obs.zone = time_zone(trip.meta.start_clock, obs.t_mid);

    if (end > begin) {
      bool all_speed = true;
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        if (!samples[i].speed) {
          all_speed = false;
          break;
        }
        sum += *samples[i].speed;
      }
      if (all_speed) {
        last_speed = sum / static_cast<double>(end - begin);
      } else {
        const std::size_t from = begin > 0 ? begin - 1 : begin;
        const double dt = samples[end - 1].t - samples[from].t;
        if (dt > 0.0) last_speed = (cum[end - 1] - cum[from]) * 1000.0 / dt;
      }
      if (end - begin >= 2) {
        last_jerk = jerk(std::span<const SensorSample>(smoothed).subspan(begin, end - begin));
      }
      for (std::size_t i = begin; i < end; ++i) tracker.update(samples[i]);
    }
    obs.speed = last_speed;
    obs.jerk = last_jerk;
    obs.congestion = tracker.level();
    out.push_back(obs);
    begin = end;
  }
  return out;
}

}  // namespace ridecomfort
