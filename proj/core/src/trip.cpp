#include "ridecomfort/trip.hpp"

#include <cmath>
#include <cstdio>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

ClockTime parse_clock(const std::string& text) {
  int h = -1;
  int m = -1;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d:%d%c", &h, &m, &tail) != 2 ||
      text.size() < 3) {
    throw ValidationError("start_clock", "expected HH:MM, got '" + text + "'");
  }
  if (h < 0 || h > 23 || m < 0 || m > 59) {
    throw ValidationError("start_clock", "out of range: '" + text + "'");
  }
  return ClockTime{h, m};
}

std::string format_clock(const ClockTime& clock) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", clock.hour, clock.minute);
  return buf;
}

void validate(const TripRecord& record) {
  const auto& meta = record.meta;
  if (meta.trip_id.empty()) throw ValidationError("trip_id", "empty");
  if (meta.commuter_id.empty()) throw ValidationError("commuter_id", "empty");
  auto bad_id = [](const std::string& id) {
    return id.find_first_of(" \t\r\n=") != std::string::npos;
  };
  if (bad_id(meta.trip_id)) throw ValidationError("trip_id", "contains whitespace or '='");
  if (bad_id(meta.commuter_id)) {
    throw ValidationError("commuter_id", "contains whitespace or '='");
  }
  if (!(meta.sample_window > 0.0) || !std::isfinite(meta.sample_window)) {
    throw ValidationError("window", "must be positive");
  }
  if (meta.start_clock.hour < 0 || meta.start_clock.hour > 23 ||
      meta.start_clock.minute < 0 || meta.start_clock.minute > 59) {
    throw ValidationError("start_clock", "out of range");
  }

  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    const auto& s = record.samples[i];
    if (!std::isfinite(s.t) || s.t < 0.0) {
      throw ValidationError("t", "sample " + std::to_string(i) + " negative or non-finite");
    }
    if (i > 0 && !(s.t > record.samples[i - 1].t)) {
      throw ValidationError("t", "t not increasing at sample " + std::to_string(i));
    }
    if (!std::isfinite(s.accel_y)) {
      throw ValidationError("accel_y", "non-finite at sample " + std::to_string(i));
    }
    if (!(std::abs(s.lat) <= 90.0)) {
      throw ValidationError("lat", "|lat| > 90 at sample " + std::to_string(i));
    }
    if (!(std::abs(s.lon) <= 180.0)) {
      throw ValidationError("lon", "|lon| > 180 at sample " + std::to_string(i));
    }
    if (s.speed && !(*s.speed >= 0.0 && std::isfinite(*s.speed))) {
      throw ValidationError("speed", "negative at sample " + std::to_string(i));
    }
  }

  const double last_t = record.duration();
  for (std::size_t i = 0; i < record.labels.size(); ++i) {
    const auto& l = record.labels[i];
    if (l.level < 1 || l.level > kComfortLevels) {
      throw ValidationError("level", "label " + std::to_string(i) + " outside 1..5");
    }
    if (!(l.t >= 0.0 && l.t <= last_t)) {
      throw ValidationError("label.t", "label " + std::to_string(i) + " outside trip");
    }
    if (i > 0 && l.t < record.labels[i - 1].t) {
      throw ValidationError("label.t", "labels not sorted at " + std::to_string(i));
    }
  }
}

int label_at(const std::vector<ComfortLabel>& labels, double t) {
  int level = 1;
  for (const auto& l : labels) {
    if (l.t > t) break;
    level = l.level;
  }
  return level;
}

void validate(const FeatureVector& fv) {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name, "likelihood outside [0,1]");
  };
  unit(fv.l_speed, "L_speed");
  unit(fv.l_jerk, "L_jerk");
  unit(fv.l_cong, "L_cong");
  if (!(fv.travel_time >= 0.0)) throw ValidationError("T_t", "negative");
  if (!(fv.distance >= 0.0)) throw ValidationError("d_t", "negative");
  if (fv.zone < 0 || fv.zone >= kTimeZones) throw ValidationError("Z", "outside 0..3");
}

int IndicatorVector::predicted_level() const {
  int best = 0;
  for (int i = 1; i < kComfortLevels; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best + 1;
}

void validate(const IndicatorVector& iv) {
  double sum = 0.0;
  for (double v : iv.p) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("p", "probability outside [0,1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("p", "does not sum to 1");
}

}  // namespace ridecomfort
