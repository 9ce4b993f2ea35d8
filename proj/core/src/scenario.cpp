#include "ridecomfort/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/random.hpp"
#include "ridecomfort/trip_io.hpp"

namespace ridecomfort {

const char* feature_name(Feature f) {
  switch (f) {
    case Feature::speed: return "speed";
    case Feature::jerk: return "jerk";
    case Feature::congestion: return "congestion";
  }
  return "?";
}

Feature parse_feature(const std::string& name) {
  if (name == "speed") return Feature::speed;
  if (name == "jerk" || name == "jerkiness") return Feature::jerk;
  if (name == "congestion") return Feature::congestion;
  throw ConfigError("unknown feature '" + name + "'");
}

void validate(const ScenarioScript& s) {
  if (s.trip_id.empty()) throw ValidationError("trip_id", "empty");
  if (s.commuter_id.empty()) throw ValidationError("commuter_id", "empty");
  if (!(s.trip_duration > 0.0)) throw ValidationError("trip_duration", "must be positive");
  if (!(s.sample_rate_hz > 0.0)) throw ValidationError("sample_rate_hz", "must be positive");
  if (!(s.sample_window > 0.0)) throw ValidationError("sample_window", "must be positive");
  if (!(s.cruise_speed > 0.0)) throw ValidationError("cruise_speed", "must be positive");
  validate(s.speed_process);
  validate(s.jerk_process);
  validate(s.congestion_process);
  for (const auto& a : s.anomaly_intervals) {
    if (!(a.start >= 0.0 && a.end > a.start && a.end <= s.trip_duration)) {
      throw ValidationError("anomaly_intervals", "interval outside trip");
    }
    if (!(a.multiplier > 0.0)) throw ValidationError("intensity_multiplier", "must be positive");
  }
  const auto& p = s.commuter_profile;
  double sum = 0.0;
  for (double w : p.weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("weights", "outside [0,1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("weights", "must sum to 1");
  for (std::size_t i = 1; i < p.thresholds.size(); ++i) {
    if (!(p.thresholds[i] > p.thresholds[i - 1])) {
      throw ValidationError("thresholds", "must be strictly increasing");
    }
  }
  for (double g : p.zone_gain) {
    if (!(g > 0.0)) throw ValidationError("zone_gain", "must be positive");
  }
}

namespace {

std::vector<double> numbers(std::istringstream& ss, std::size_t line) {
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok, line));
  return out;
}

void expect_count(const std::vector<double>& v, std::size_t n, const std::string& key,
                  std::size_t line) {
  if (v.size() != n) {
    throw ParseError(line, key + " expects " + std::to_string(n) + " values");
  }
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

ScenarioTemplate parse_scenario(const std::string& text) {
  ScenarioTemplate t;
  auto& b = t.base;
  bool explicit_anomalies = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(lineno, "expected key = value");
    }
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    std::istringstream ss(line.substr(eq + 1));

    if (key == "trip_id" || key == "commuter_id" || key == "start_clock") {
      std::string v;
      ss >> v;
      if (key == "trip_id") b.trip_id = v;
      if (key == "commuter_id") b.commuter_id = v;
      if (key == "start_clock") {
        if (v == "random") {
          t.random_start_clock = true;
        } else {
          b.start_clock = parse_clock(v);
        }
      }
      continue;
    }
    if (key == "anomaly") {
      std::string a, e, f, m;
      ss >> a >> e >> f >> m;
      if (m.empty()) throw ParseError(lineno, "anomaly expects start end feature multiplier");
      if (!explicit_anomalies) b.anomaly_intervals.clear();
      explicit_anomalies = true;
      b.anomaly_intervals.push_back({parse_double(a, lineno), parse_double(e, lineno),
                                     parse_feature(f), parse_double(m, lineno)});
      continue;
    }
    if (key == "random_anomaly_features") {
      t.random_anomaly_features.clear();
      std::string f;
      while (ss >> f) t.random_anomaly_features.push_back(parse_feature(f));
      continue;
    }

    const auto v = numbers(ss, lineno);
    if (key == "duration") {
      if (v.size() == 2) {
        t.duration_range = std::array<double, 2>{v[0], v[1]};
        b.trip_duration = v[1];
      } else {
        expect_count(v, 1, key, lineno);
        b.trip_duration = v[0];
      }
    } else if (key == "sample_rate_hz") {
      expect_count(v, 1, key, lineno);
      b.sample_rate_hz = v[0];
    } else if (key == "window") {
      expect_count(v, 1, key, lineno);
      b.sample_window = v[0];
    } else if (key == "cruise_speed") {
      expect_count(v, 1, key, lineno);
      b.cruise_speed = v[0];
    } else if (key == "origin") {
      expect_count(v, 2, key, lineno);
      b.origin = {v[0], v[1]};
    } else if (key == "speed_process") {
      expect_count(v, 3, key, lineno);
      b.speed_process = {v[0], v[1], v[2]};
    } else if (key == "jerk_process") {
      expect_count(v, 4, key, lineno);
      b.jerk_process = {v[0], v[1], v[2], v[3]};
    } else if (key == "congestion_process") {
      expect_count(v, 4, key, lineno);
      b.congestion_process = {v[0], v[1], v[2], v[3]};
    } else if (key == "weights") {
      expect_count(v, 3, key, lineno);
      std::copy(v.begin(), v.end(), b.commuter_profile.weights.begin());
    } else if (key == "thresholds") {
      expect_count(v, 4, key, lineno);
      std::copy(v.begin(), v.end(), b.commuter_profile.thresholds.begin());
    } else if (key == "zone_gain") {
      expect_count(v, 4, key, lineno);
      std::copy(v.begin(), v.end(), b.commuter_profile.zone_gain.begin());
    } else if (key == "random_anomalies") {
      expect_count(v, 1, key, lineno);
      t.random_anomalies = static_cast<int>(v[0]);
    } else if (key == "random_anomaly_duration") {
      expect_count(v, 2, key, lineno);
      t.random_anomaly_duration = {v[0], v[1]};
    } else if (key == "random_anomaly_multiplier") {
      expect_count(v, 1, key, lineno);
      t.random_anomaly_multiplier = v[0];
    } else if (key == "random_anomaly_earliest") {
      expect_count(v, 1, key, lineno);
      t.random_anomaly_earliest = v[0];
    } else if (key == "commuters") {
      expect_count(v, 1, key, lineno);
      t.commuters = static_cast<int>(v[0]);
    } else if (key == "commuter_offset") {
      expect_count(v, 1, key, lineno);
      t.commuter_offset = static_cast<int>(v[0]);
    } else if (key == "profile_seed") {
      expect_count(v, 1, key, lineno);
      t.profile_seed = static_cast<std::uint64_t>(v[0]);
    } else {
      throw ParseError(lineno, "unknown scenario key '" + key + "'");
    }
  }

  if (t.random_anomalies < 0) throw ConfigError("random_anomalies must be >= 0");
  if (t.commuters < 0) throw ConfigError("commuters must be >= 0");
  if (t.duration_range && !((*t.duration_range)[1] >= (*t.duration_range)[0])) {
    throw ConfigError("duration range must be lo hi");
  }
  if (t.random_anomalies > 0 && t.random_anomaly_features.empty()) {
    throw ConfigError("random_anomaly_features is empty");
  }
  validate(b);
  return t;
}

ScenarioTemplate load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path));
}

std::string format_scenario(const ScenarioTemplate& t) {
  const auto& b = t.base;
  std::ostringstream out;
  out << "trip_id = " << b.trip_id << "\n";
  out << "commuter_id = " << b.commuter_id << "\n";
  out << "start_clock = " << (t.random_start_clock ? "random" : format_clock(b.start_clock))
      << "\n";
  if (t.duration_range) {
    out << "duration = " << join({(*t.duration_range)[0], (*t.duration_range)[1]}) << "\n";
  } else {
    out << "duration = " << format_double(b.trip_duration) << "\n";
  }
  out << "sample_rate_hz = " << format_double(b.sample_rate_hz) << "\n";
  out << "window = " << format_double(b.sample_window) << "\n";
  out << "cruise_speed = " << format_double(b.cruise_speed) << "\n";
  out << "origin = " << join({b.origin.lat, b.origin.lon}) << "\n";
  const auto& sp = b.speed_process;
  out << "speed_process = " << join({sp.mu, sp.alpha, sp.beta}) << "\n";
  const auto& jp = b.jerk_process;
  out << "jerk_process = " << join({jp.mu, jp.alpha, jp.beta, jp.sigma_s}) << "\n";
  const auto& cp = b.congestion_process;
  out << "congestion_process = " << join({cp.mu, cp.alpha, cp.beta, cp.sigma_s}) << "\n";
  for (const auto& a : b.anomaly_intervals) {
    out << "anomaly = " << format_double(a.start) << ' ' << format_double(a.end) << ' '
        << feature_name(a.feature) << ' ' << format_double(a.multiplier) << "\n";
  }
  const auto& p = b.commuter_profile;
  out << "weights = " << join({p.weights.begin(), p.weights.end()}) << "\n";
  out << "thresholds = " << join({p.thresholds.begin(), p.thresholds.end()}) << "\n";
  out << "zone_gain = " << join({p.zone_gain.begin(), p.zone_gain.end()}) << "\n";
  out << "random_anomalies = " << t.random_anomalies << "\n";
  out << "random_anomaly_duration = "
      << join({t.random_anomaly_duration[0], t.random_anomaly_duration[1]}) << "\n";
  out << "random_anomaly_multiplier = " << format_double(t.random_anomaly_multiplier) << "\n";
  out << "random_anomaly_earliest = " << format_double(t.random_anomaly_earliest) << "\n";
  out << "random_anomaly_features =";
  for (auto f : t.random_anomaly_features) out << ' ' << feature_name(f);
  out << "\n";
  out << "commuters = " << t.commuters << "\n";
  out << "commuter_offset = " << t.commuter_offset << "\n";
  out << "profile_seed = " << t.profile_seed << "\n";
  return out.str();
}

std::string commuter_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "c%03d", index);
  return buf;
}

CommuterProfile random_profile(std::uint64_t profile_seed, int index) {
  SeededRng rng(mix_seed(profile_seed, static_cast<std::uint64_t>(index)));
  CommuterProfile p;
  const auto dominant = static_cast<std::size_t>(rng.below(kFeatureCount));
  const double w_dom = rng.uniform(0.55, 0.8);
  const double split = rng.uniform();
  const std::size_t a = (dominant + 1) % kFeatureCount;
  const std::size_t b = (dominant + 2) % kFeatureCount;
  p.weights[dominant] = w_dom;
  p.weights[a] = (1.0 - w_dom) * split;
  p.weights[b] = 1.0 - w_dom - p.weights[a];
  const double tolerance = rng.uniform(0.8, 1.25);
  for (auto& th : p.thresholds) th *= tolerance;
  const double night = rng.uniform(1.0, 1.4);
  p.zone_gain = {1.0, 1.0, 1.0 + 0.5 * (night - 1.0), night};
  return p;
}

ScenarioScript instantiate(const ScenarioTemplate& tmpl, std::size_t trip_index,
                           std::uint64_t seed) {
  ScenarioScript s = tmpl.base;
  SeededRng rng(mix_seed(seed, 0x5ce0a000u + trip_index));
  char id[32];
  std::snprintf(id, sizeof id, "%s-%04zu", tmpl.base.trip_id.c_str(), trip_index);
  s.trip_id = id;

  if (tmpl.duration_range) {
    const auto [lo, hi] = *tmpl.duration_range;
    s.trip_duration = std::round(rng.uniform(lo, hi));
  }
  if (tmpl.random_start_clock) {
    const auto minute = static_cast<int>(rng.below(24 * 60));
    s.start_clock = {minute / 60, minute % 60};
  }
  if (tmpl.commuters > 0) {
    const int index = tmpl.commuter_offset + static_cast<int>(trip_index % tmpl.commuters);
    s.commuter_id = commuter_name(index);
    s.commuter_profile = random_profile(tmpl.profile_seed, index);
  }
  s.anomaly_intervals.erase(
      std::remove_if(s.anomaly_intervals.begin(), s.anomaly_intervals.end(),
                     [&](const AnomalyInterval& a) { return a.end > s.trip_duration; }),
      s.anomaly_intervals.end());
  for (int k = 0; k < tmpl.random_anomalies; ++k) {
    const double dur = rng.uniform(tmpl.random_anomaly_duration[0], tmpl.random_anomaly_duration[1]);
    const double latest = s.trip_duration - dur;
    if (latest < tmpl.random_anomaly_earliest) break;
    const double start = std::round(rng.uniform(tmpl.random_anomaly_earliest, latest));
    const auto f = tmpl.random_anomaly_features[rng.below(tmpl.random_anomaly_features.size())];
    s.anomaly_intervals.push_back(
        {start, std::min(s.trip_duration, start + std::round(dur)), f,
         tmpl.random_anomaly_multiplier});
  }
  validate(s);
  return s;
}

}  // namespace ridecomfort
