#include "ridecomfort/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/kendall.hpp"
#include "ridecomfort/roc.hpp"
#include "ridecomfort/synth.hpp"
#include "ridecomfort/trip_io.hpp"

namespace ridecomfort {

namespace {

const char* kSobolInputs[] = {"l_speed", "l_jerk", "l_congestion", "travel_time", "distance", "zone"};

}  // namespace

std::vector<std::filesystem::path> cmd_synth(const std::filesystem::path& scenario, std::size_t count,
                                             std::uint64_t seed, const std::filesystem::path& out_dir) {
  const auto tmpl = load_scenario(scenario);
  std::vector<std::filesystem::path> written;
  if (count == 0) return written;
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < count; ++i) {
    const auto script = instantiate(tmpl, i, seed);
    SeededRng rng(mix_seed(seed, i));
    const auto trip = render_trip(script, rng);
    auto path = out_dir / (trip.meta.trip_id + ".trip");
    write_trip(trip, path);
    written.push_back(std::move(path));
  }
  return written;
}

std::string cmd_extract(const std::filesystem::path& trip_path, const PipelineConfig& cfg) {
  const auto trip = parse_trip(trip_path);
  std::ostringstream out;
  out << "window,t_mid,speed,jerk,congestion,travel_time,distance,zone\n";
  for (const auto& w : windows(trip, cfg.smoother)) {
    out << w.window_index << ',' << format_double(w.t_mid) << ',' << format_double(w.speed) << ','
        << format_double(w.jerk) << ',' << w.congestion << ',' << format_double(w.travel_time) << ','
        << format_double(w.distance) << ',' << w.zone << '\n';
  }
  return out.str();
}

KeyValueReport cmd_detect(const std::filesystem::path& trip_path, const PipelineConfig& cfg, std::string* csv) {
  const auto trip = parse_trip(trip_path);
  const auto tr = detect_trip(trip, cfg);
  const auto& truth = trip.ground_truth_anomaly;

  if (csv) {
    std::ostringstream out;
    out << "window,t_mid,speed,jerk,congestion,score_speed,score_jerk,score_congestion,bootstrap,truth\n";
    for (std::size_t k = 0; k < tr.windows.size(); ++k) {
      const auto& w = tr.windows[k];
      out << w.window_index << ',' << format_double(w.t_mid) << ',' << format_double(w.speed) << ','
          << format_double(w.jerk) << ',' << w.congestion << ',' << format_double(tr.scores[0][k]) << ','
          << format_double(tr.scores[1][k]) << ',' << format_double(tr.scores[2][k]) << ','
          << (k < tr.bootstrap ? 1 : 0) << ',';
      if (truth && k < truth->size()) {
        out << ((*truth)[k] ? 1 : 0);
      } else {
        out << '-';
      }
      out << '\n';
    }
    *csv = out.str();
  }

  KeyValueReport kv;
  kv.add("trip_id", trip.meta.trip_id);
  kv.add("detector", detector_kind_name(cfg.detector));
  kv.add("windows", tr.windows.size());
  kv.add("bootstrap_windows", tr.bootstrap);
  kv.add("ready", tr.ready ? "true" : "false");
  if (truth && truth->size() == tr.windows.size() && tr.ready) {
    std::vector<int> labels;
    for (std::size_t k = tr.bootstrap; k < truth->size(); ++k) labels.push_back((*truth)[k] ? 1 : 0);
    for (auto f : kFeatures) {
      const auto& s = tr.scores[static_cast<std::size_t>(f)];
      const std::vector<double> post(s.begin() + static_cast<std::ptrdiff_t>(tr.bootstrap), s.end());
      const auto key = std::string("auc_") + feature_name(f);
      try {
        kv.add(key, roc_auc(post, labels));
      } catch (const UndefinedMetricError&) {
        kv.add(key, "undefined");
      }
    }
  }
  return kv;
}

std::vector<DatasetTrip> load_dataset(const std::filesystem::path& dir, const PipelineConfig& cfg,
                                      std::vector<std::string>* skipped) {
  std::vector<DatasetTrip> out;
  std::vector<std::string> unlabeled;
  std::set<std::string> ids;
  for (const auto& path : list_trip_files(dir)) {
    DatasetTrip d;
    d.trip = parse_trip(path);
    if (d.trip.labels.empty()) {
      unlabeled.push_back(d.trip.meta.trip_id);
      continue;
    }
    if (!ids.insert(d.trip.meta.trip_id).second) {
      throw ValidationError("trip_id", "duplicate trip id '" + d.trip.meta.trip_id + "' in " + dir.string());
    }
    d.traces = detect_trip(d.trip, cfg);
    if (!d.traces.ready) {
      if (skipped) skipped->push_back(d.trip.meta.trip_id);
      continue;
    }
    d.features = labeled_features(d.trip, d.traces);
    out.push_back(std::move(d));
  }
  if (!unlabeled.empty()) {
    std::string list;
    for (const auto& id : unlabeled) list += (list.empty() ? "" : ", ") + id;
    throw ValidationError("labels", "trips without comfort labels: " + list);
  }
  return out;
}

namespace {

std::vector<LabeledFeature> gather(const std::vector<DatasetTrip>& data, const std::vector<std::string>& ids) {
  const std::set<std::string> wanted(ids.begin(), ids.end());
  std::vector<LabeledFeature> out;
  for (const auto& d : data) {
    if (wanted.count(d.trip.meta.trip_id)) out.insert(out.end(), d.features.begin(), d.features.end());
  }
  return out;
}

std::vector<std::string> trip_ids(const std::vector<DatasetTrip>& data) {
  std::vector<std::string> ids;
  for (const auto& d : data) ids.push_back(d.trip.meta.trip_id);
  return ids;
}

}  // namespace

KeyValueReport cmd_train(const std::filesystem::path& dataset, const PipelineConfig& cfg,
                         const std::filesystem::path& model_out) {
  std::vector<std::string> skipped;
  const auto data = load_dataset(dataset, cfg, &skipped);
  const auto split = split_trips(trip_ids(data), cfg.seed);
  const auto train_set = gather(data, split.train);
  const auto val_set = gather(data, split.validation);
  if (train_set.empty()) throw InsufficientDataError("no training windows in " + dataset.string());

  TrainResult result;
  const auto model = train_mtl(train_set, val_set, cfg.train, &result);
  model.save(model_out);

  std::ostringstream curve;
  curve << "epoch,train_loss,validation_loss\n";
  for (std::size_t e = 0; e < result.train_loss.size(); ++e) {
    curve << e + 1 << ',' << format_double(result.train_loss[e]) << ',';
    curve << (e < result.validation_loss.size() ? format_double(result.validation_loss[e]) : "-") << '\n';
  }
  auto curve_path = model_out;
  curve_path += ".loss.csv";
  write_file_atomic(curve_path, curve.str());

  KeyValueReport kv;
  kv.add("trips_train", split.train.size());
  kv.add("trips_validation", split.validation.size());
  kv.add("trips_test", split.test.size());
  kv.add("trips_too_short", skipped.size());
  kv.add("windows_train", train_set.size());
  kv.add("windows_validation", val_set.size());
  kv.add("commuters", model.head_count());
  kv.add("epochs", result.train_loss.size());
  if (!result.train_loss.empty()) kv.add("train_loss", result.train_loss.back());
  if (!result.validation_loss.empty()) kv.add("validation_loss", result.validation_loss.back());
  for (const auto& c : result.skipped_commuters) kv.add("warning_untrained_commuter", c);
  kv.add("model", model_out.string());
  return kv;
}

int oracle_rating(const TripRecord& trip, const TripTraces& traces) {
  std::vector<int> levels;
  for (std::size_t k = traces.bootstrap; k < traces.windows.size(); ++k) {
    levels.push_back(label_at(trip.labels, traces.windows[k].t_mid));
  }
  return trip_rating(levels);
}

SobolResult feature_importance(const MtlModel& model, std::size_t samples, std::uint64_t seed) {
  const auto& s = model.scale();
  const std::vector<std::pair<double, double>> ranges = {
      {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, s.travel_time_max}, {0.0, s.distance_max}, {0.0, 4.0}};
  SobolModel f = [&model](std::span<const double> x) {
    FeatureVector fv{x[0], x[1], x[2], x[3], x[4], std::min(3, static_cast<int>(x[5]))};
    return static_cast<double>(model.forward_population(fv).predicted_level());
  };
  SeededRng rng(mix_seed(seed, 0x50b01));
  return sobol_total_order(f, ranges, samples, rng);
}

KeyValueReport cmd_eval(const std::filesystem::path& dataset, const std::filesystem::path& model_path,
                        const PipelineConfig& cfg) {
  const auto model = MtlModel::load(model_path);
  const auto data = load_dataset(dataset, cfg);
  const auto split = split_trips(trip_ids(data), cfg.seed);
  const std::set<std::string> test(split.test.begin(), split.test.end());

  std::vector<IndicatorVector> predictions;
  std::vector<int> truth;
  std::vector<double> predicted_rating;
  std::vector<double> true_rating;
  std::size_t cold = 0;
  for (const auto& d : data) {
    if (!test.count(d.trip.meta.trip_id)) continue;
    if (!model.has_commuter(d.trip.meta.commuter_id)) ++cold;
    std::vector<int> levels;
    for (const auto& lf : d.features) {
      const auto iv = model.forward_or_population(lf.commuter_id, lf.x);
      predictions.push_back(iv);
      truth.push_back(lf.level);
      levels.push_back(iv.predicted_level());
    }
    predicted_rating.push_back(trip_rating(levels));
    true_rating.push_back(oracle_rating(d.trip, d.traces));
  }

  KeyValueReport kv;
  kv.add("trips_test", predicted_rating.size());
  kv.add("trips_without_head", cold);
  kv.add("windows_test", predictions.size());
  try {
    const auto roc = multiclass_auc(predictions, truth);
    for (int level = 1; level <= kComfortLevels; ++level) {
      const auto key = "auc_level_" + std::to_string(level);
      if (auto it = roc.per_class.find(level); it != roc.per_class.end()) {
        kv.add(key, it->second);
      } else {
        kv.add(key, "absent");
      }
    }
    kv.add("auc_macro", roc.macro);
  } catch (const UndefinedMetricError&) {
    kv.add("auc_macro", "undefined");
  }
  try {
    kv.add("kendall_w", kendall_w({predicted_rating, true_rating}));
  } catch (const UndefinedMetricError&) {
    kv.add("kendall_w", "undefined");
  }
  try {
    const auto sobol = feature_importance(model, cfg.sobol_samples, cfg.seed);
    for (std::size_t i = 0; i < sobol.total.size(); ++i) {
      kv.add(std::string("sobol_") + kSobolInputs[i], sobol.total[i]);
      kv.add(std::string("sobol_") + kSobolInputs[i] + "_ci", sobol.half_width[i]);
    }
    kv.add("sobol_samples", sobol.samples);
  } catch (const UndefinedMetricError&) {
    kv.add("sobol", "undefined");
  }
  return kv;
}

TripReport cmd_run(const std::filesystem::path& trip_path, const std::filesystem::path& model_path,
                   const PipelineConfig& cfg, const std::filesystem::path& queue_file) {
  const auto trip = parse_trip(trip_path);
  const auto model = MtlModel::load(model_path);
  const auto traces = detect_trip(trip, cfg);
  if (queue_file.empty()) return run_trip(trip, traces, model, cfg, nullptr);
  auto queue = std::filesystem::exists(queue_file) ? FeedbackQueue::load(queue_file) : FeedbackQueue{};
  auto report = run_trip(trip, traces, model, cfg, &queue);
  queue.save(queue_file);
  return report;
}

KeyValueReport cmd_rate(const std::filesystem::path& trip_path, const std::filesystem::path& model_path,
                        const PipelineConfig& cfg) {
  const auto trip = parse_trip(trip_path);
  const auto model = MtlModel::load(model_path);
  const auto traces = detect_trip(trip, cfg);
  const auto report = run_trip(trip, traces, model, cfg, nullptr);
  KeyValueReport kv;
  kv.add("trip_id", trip.meta.trip_id);
  kv.add("rating", report.rating);
  if (!trip.labels.empty()) kv.add("oracle_rating", oracle_rating(trip, traces));
  return kv;
}

}  // namespace ridecomfort
