#include "ridecomfort/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/report.hpp"
#include "ridecomfort/trip_io.hpp"

namespace ridecomfort {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(const std::string& key, const std::string& value) {
  try {
    return parse_double(value, 0);
  } catch (const ParseError&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long integer(const std::string& key, const std::string& value) {
  const double v = number(key, value);
  if (v != std::floor(v)) throw ConfigError("config key '" + key + "': expected an integer");
  return static_cast<long long>(v);
}

std::pair<double, double> range(const std::string& key, const std::string& value) {
  const auto comma = value.find(',');
  if (comma == std::string::npos) throw ConfigError("config key '" + key + "': expected lo,hi");
  return {number(key, trim(value.substr(0, comma))), number(key, trim(value.substr(comma + 1)))};
}

const char* kRangeKeys[kFeatureCount] = {"speed_range", "jerk_range", "congestion_range"};

}  // namespace

std::array<ScalarEncoderConfig, kFeatureCount> PipelineConfig::default_encoders() {
  std::array<ScalarEncoderConfig, kFeatureCount> e{};
  e[0].min = 0.0;  // m/s
  e[0].max = 35.0;
  e[1].min = -1.0;  // m/s^3
  e[1].max = 1.0;
  e[2].min = 0.0;
  e[2].max = 2.0;
  return e;
}

void validate(const PipelineConfig& c) {
  for (const auto& e : c.encoders) validate(e);
  validate(c.detectors.htm.pooler);
  validate(c.detectors.htm.memory);
  validate(c.detectors.htm.likelihood);
  validate(c.detectors.re);
  validate(c.detectors.expose);
  validate(c.train);
  if (!(c.bootstrap_minutes >= 0.0)) throw ConfigError("bootstrap_minutes must be >= 0");
  if (!(c.query_gap > 0.0 && c.query_gap <= 1.0)) throw ConfigError("query_gap must be in (0,1]");
  if (c.sobol_samples < 256) throw ConfigError("sobol_samples must be >= 256");
  if (c.smoother.width < 1 || c.smoother.width % 2 == 0) throw ConfigError("smoother_width must be odd");
}

void apply_config_text(PipelineConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto& htm = cfg.detectors.htm;
    if (key == "detector") {
      cfg.detector = parse_detector_kind(value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(integer(key, value));
    } else if (key == "bootstrap_minutes") {
      cfg.bootstrap_minutes = number(key, value);
    } else if (key == kRangeKeys[0] || key == kRangeKeys[1] || key == kRangeKeys[2]) {
      const auto i = static_cast<std::size_t>(std::find(std::begin(kRangeKeys), std::end(kRangeKeys), key) -
                                              std::begin(kRangeKeys));
      std::tie(cfg.encoders[i].min, cfg.encoders[i].max) = range(key, value);
    } else if (key == "encoder_buckets") {
      for (auto& e : cfg.encoders) e.buckets = static_cast<int>(integer(key, value));
    } else if (key == "encoder_active_bits") {
      for (auto& e : cfg.encoders) e.active_bits = static_cast<int>(integer(key, value));
    } else if (key == "columns") {
      htm.pooler.columns = static_cast<int>(integer(key, value));
    } else if (key == "cells_per_column") {
      htm.memory.cells_per_column = static_cast<int>(integer(key, value));
    } else if (key == "likelihood_window") {
      htm.likelihood.window = static_cast<std::size_t>(integer(key, value));
    } else if (key == "likelihood_short_window") {
      htm.likelihood.short_window = static_cast<std::size_t>(integer(key, value));
    } else if (key == "re_window") {
      cfg.detectors.re.window = static_cast<std::size_t>(integer(key, value));
    } else if (key == "re_bins") {
      cfg.detectors.re.bins = static_cast<std::size_t>(integer(key, value));
    } else if (key == "re_chi_threshold") {
      cfg.detectors.re.chi_threshold = number(key, value);
    } else if (key == "expose_decay") {
      cfg.detectors.expose.decay = number(key, value);
    } else if (key == "expose_gamma") {
      cfg.detectors.expose.gamma = number(key, value);
    } else if (key == "smoother_width") {
      cfg.smoother.width = static_cast<int>(integer(key, value));
    } else if (key == "hidden") {
      cfg.train.hidden = static_cast<int>(integer(key, value));
    } else if (key == "learning_rate") {
      cfg.train.learning_rate = number(key, value);
    } else if (key == "epochs") {
      cfg.train.epochs = static_cast<int>(integer(key, value));
    } else if (key == "batch_size") {
      cfg.train.batch_size = static_cast<int>(integer(key, value));
    } else if (key == "train_seed") {
      cfg.train.seed = static_cast<std::uint64_t>(integer(key, value));
    } else if (key == "query_gap") {
      cfg.query_gap = number(key, value);
    } else if (key == "sobol_samples") {
      cfg.sobol_samples = static_cast<std::size_t>(integer(key, value));
    } else if (key == "trips_dir") {
      cfg.trips_dir = value;
    } else if (key == "models_dir") {
      cfg.models_dir = value;
    } else if (key == "reports_dir") {
      cfg.reports_dir = value;
    } else {
      throw ConfigError("config line " + std::to_string(n) + ": unknown key '" + key + "'");
    }
  }
  validate(cfg);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig cfg;
  apply_config_text(cfg, read_file(path));
  return cfg;
}

std::string format_config(const PipelineConfig& c) {
  std::ostringstream out;
  const auto& htm = c.detectors.htm;
  out << "detector = " << detector_kind_name(c.detector) << "\n"
      << "seed = " << c.seed << "\n"
      << "bootstrap_minutes = " << format_double(c.bootstrap_minutes) << "\n";
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    out << kRangeKeys[i] << " = " << format_double(c.encoders[i].min) << "," << format_double(c.encoders[i].max)
        << "\n";
  }
  out << "encoder_buckets = " << c.encoders[0].buckets << "\n"
      << "encoder_active_bits = " << c.encoders[0].active_bits << "\n"
      << "columns = " << htm.pooler.columns << "\n"
      << "cells_per_column = " << htm.memory.cells_per_column << "\n"
      << "likelihood_window = " << htm.likelihood.window << "\n"
      << "likelihood_short_window = " << htm.likelihood.short_window << "\n"
      << "re_window = " << c.detectors.re.window << "\n"
      << "re_bins = " << c.detectors.re.bins << "\n"
      << "re_chi_threshold = " << format_double(c.detectors.re.chi_threshold) << "\n"
      << "expose_decay = " << format_double(c.detectors.expose.decay) << "\n"
      << "expose_gamma = " << format_double(c.detectors.expose.gamma) << "\n"
      << "smoother_width = " << c.smoother.width << "\n"
      << "hidden = " << c.train.hidden << "\n"
      << "learning_rate = " << format_double(c.train.learning_rate) << "\n"
      << "epochs = " << c.train.epochs << "\n"
      << "batch_size = " << c.train.batch_size << "\n"
      << "train_seed = " << c.train.seed << "\n"
      << "query_gap = " << format_double(c.query_gap) << "\n"
      << "sobol_samples = " << c.sobol_samples << "\n"
      << "trips_dir = " << c.trips_dir.string() << "\n"
      << "models_dir = " << c.models_dir.string() << "\n"
      << "reports_dir = " << c.reports_dir.string() << "\n";
  return out.str();
}

std::size_t bootstrap_windows(double bootstrap_minutes, double sample_window) {
  if (!(sample_window > 0.0)) throw ValidationError("sample_window", "must be positive");
  return static_cast<std::size_t>(std::ceil(bootstrap_minutes * 60.0 / sample_window - 1e-9));
}

double feature_value(const WindowObservation& w, Feature f) {
  switch (f) {
    case Feature::speed: return w.speed;
    case Feature::jerk: return w.jerk;
    case Feature::congestion: return static_cast<double>(w.congestion);
  }
  return 0.0;
}

FeatureVector TripTraces::feature_vector(std::size_t k) const {
  const auto& w = windows.at(k);
  return {scores[0][k], scores[1][k], scores[2][k], w.travel_time, w.distance, w.zone};
}

TripTraces detect_trip(const TripRecord& trip, const PipelineConfig& cfg, DetectorKind kind,
                       std::size_t bootstrap) {
  TripTraces tr;
  tr.windows = windows(trip, cfg.smoother);
  tr.bootstrap = bootstrap;
  for (auto f : kFeatures) {
    const auto fi = static_cast<std::size_t>(f);
    std::vector<double> stream;
    stream.reserve(tr.windows.size());
    for (const auto& w : tr.windows) stream.push_back(feature_value(w, f));
    auto detector = make_detector(kind, cfg.detectors, cfg.encoders[fi], mix_seed(cfg.seed, fi + 1));
    const auto boot = ridecomfort::bootstrap(*detector, stream, bootstrap);
    auto& out = tr.scores[fi];
    out = boot.scores;
    for (std::size_t k = boot.consumed; k < stream.size(); ++k) out.push_back(detector->step(stream[k]));
    tr.ready = boot.ready;
  }
  return tr;
}

TripTraces detect_trip(const TripRecord& trip, const PipelineConfig& cfg) {
  return detect_trip(trip, cfg, cfg.detector, bootstrap_windows(cfg.bootstrap_minutes, trip.meta.sample_window));
}

std::vector<LabeledFeature> labeled_features(const TripRecord& trip, const TripTraces& traces) {
  std::vector<LabeledFeature> out;
  for (std::size_t k = traces.bootstrap; k < traces.windows.size(); ++k) {
    out.push_back({trip.meta.commuter_id, trip.meta.trip_id, traces.windows[k].window_index,
                   traces.feature_vector(k), label_at(trip.labels, traces.windows[k].t_mid)});
  }
  return out;
}

int trip_rating(const std::vector<int>& levels) {
  if (levels.empty()) throw InsufficientDataError("no predicted windows to rate");
  double sum = 0.0;
  for (int l : levels) sum += l;
  const double mean = sum / static_cast<double>(levels.size());
  return std::clamp(static_cast<int>(std::floor(mean + 0.5)), 1, kComfortLevels);
}

std::array<double, kFeatureCount> feature_impacts(const TripTraces& traces) {
  std::array<double, kFeatureCount> mean{};
  const std::size_t n = traces.windows.size() > traces.bootstrap ? traces.windows.size() - traces.bootstrap : 0;
  if (n == 0) throw InsufficientDataError("insufficient trip length");
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    for (std::size_t k = traces.bootstrap; k < traces.windows.size(); ++k) mean[f] += traces.scores[f][k];
    mean[f] /= static_cast<double>(n);
  }
  const double total = mean[0] + mean[1] + mean[2];
  std::array<double, kFeatureCount> impact{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    impact[f] = total > 0.0 ? 100.0 * mean[f] / total : 100.0 / kFeatureCount;
  }
  return impact;
}

TripReport run_trip(const TripRecord& trip, const TripTraces& traces, const MtlModel& model,
                    const PipelineConfig& cfg, FeedbackQueue* queue) {
  if (!traces.ready) throw InsufficientDataError("insufficient trip length");
  TripReport r;
  r.trip_id = trip.meta.trip_id;
  r.commuter_id = trip.meta.commuter_id;
  r.first_window = traces.bootstrap;
  for (std::size_t k = traces.bootstrap; k < traces.windows.size(); ++k) {
    const auto fv = traces.feature_vector(k);
    const auto iv = model.forward(trip.meta.commuter_id, fv);
    r.indicators.push_back(iv);
    r.levels.push_back(iv.predicted_level());
    if (queue) {
      const auto& w = traces.windows[k];
      if (auto q = queue->offer(trip.meta.commuter_id, trip.meta.trip_id, w.window_index, w.t_mid, fv, iv,
                                cfg.query_gap)) {
        if (!trip.labels.empty()) queue->answer(*q, label_at(trip.labels, w.t_mid));
        r.queries.push_back(queue->queries()[*q]);
      }
    }
  }
  r.rating = trip_rating(r.levels);
  r.impact = feature_impacts(traces);
  return r;
}

std::size_t collect_feedback(const TripRecord& trip, const TripTraces& traces, const MtlModel& model,
                             const PipelineConfig& cfg, FeedbackQueue& queue) {
  std::size_t logged = 0;
  for (std::size_t k = traces.bootstrap; k < traces.windows.size(); ++k) {
    const auto fv = traces.feature_vector(k);
    const auto& w = traces.windows[k];
    const auto iv = model.forward_or_population(trip.meta.commuter_id, fv);
    if (auto q = queue.offer(trip.meta.commuter_id, trip.meta.trip_id, w.window_index, w.t_mid, fv, iv,
                             cfg.query_gap)) {
      if (!trip.labels.empty()) queue.answer(*q, label_at(trip.labels, w.t_mid));
      ++logged;
    }
  }
  return logged;
}

std::string format_trip_report(const TripReport& r) {
  KeyValueReport kv;
  kv.add("trip_id", r.trip_id);
  kv.add("commuter_id", r.commuter_id);
  kv.add("rating", r.rating);
  kv.add("predicted_windows", r.levels.size());
  kv.add("first_window", r.first_window);
  for (auto f : kFeatures) {
    kv.add(std::string("impact_") + feature_name(f), r.impact[static_cast<std::size_t>(f)]);
  }
  std::array<std::size_t, kComfortLevels> counts{};
  for (int l : r.levels) ++counts[static_cast<std::size_t>(l - 1)];
  for (int l = 1; l <= kComfortLevels; ++l) {
    kv.add("windows_level_" + std::to_string(l), counts[static_cast<std::size_t>(l - 1)]);
  }
  kv.add("queries", r.queries.size());
  for (std::size_t i = 0; i < r.queries.size(); ++i) {
    const auto& q = r.queries[i];
    std::string v = std::to_string(q.window_index) + "," + format_double(q.t);
    v += "," + (q.answer ? std::to_string(*q.answer) : std::string("-"));
    kv.add("query_" + std::to_string(i), v);
  }
  return kv.str();
}

TripSplit split_trips(std::vector<std::string> ids, std::uint64_t seed) {
  std::sort(ids.begin(), ids.end());
  SeededRng rng(mix_seed(seed, 0x5b1170));
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[static_cast<std::size_t>(rng.below(i))]);
  const auto n = static_cast<double>(ids.size());
  const auto n_train = static_cast<std::size_t>(std::lround(0.6 * n));
  const auto n_val = std::min(ids.size() - n_train, static_cast<std::size_t>(std::lround(0.2 * n)));
  TripSplit s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                      ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return s;
}

std::vector<std::filesystem::path> list_trip_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".trip") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ridecomfort
