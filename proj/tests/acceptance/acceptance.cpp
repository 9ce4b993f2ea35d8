// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria ("C3 C8"); `--cli <path>` also checks the command-line
// tool for byte-reproducible output.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ridecomfort/anomaly_likelihood.hpp"
#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/commands.hpp"
#include "ridecomfort/comfort_scales.hpp"
#include "ridecomfort/error.hpp"
#include "ridecomfort/hawkes.hpp"
#include "ridecomfort/htm_detector.hpp"
#include "ridecomfort/kendall.hpp"
#include "ridecomfort/roc.hpp"
#include "ridecomfort/sobol.hpp"
#include "ridecomfort/synth.hpp"
#include "ridecomfort/trip_io.hpp"
#include "support.hpp"

using namespace ridecomfort;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream o;
  o.precision(digits);
  o << std::fixed << v;
  return o.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<TripRecord> render_suite(const ScenarioTemplate& tmpl, std::size_t count, std::uint64_t seed) {
  std::vector<TripRecord> trips;
  for (std::size_t i = 0; i < count; ++i) {
    SeededRng rng(mix_seed(seed, i));
    trips.push_back(render_trip(instantiate(tmpl, i, seed), rng));
  }
  return trips;
}

// The feature carrying the trip's injected anomaly, read back from the
// scenario the trip was rendered from.
Feature anomaly_feature(const ScenarioTemplate& tmpl, std::size_t i, std::uint64_t seed) {
  return instantiate(tmpl, i, seed).anomaly_intervals.at(0).feature;
}

double trip_auc(const TripRecord& trip, const TripTraces& tr, Feature f) {
  const auto& truth = *trip.ground_truth_anomaly;
  const auto& s = tr.scores[static_cast<std::size_t>(f)];
  std::vector<double> scores(s.begin() + static_cast<std::ptrdiff_t>(tr.bootstrap), s.end());
  std::vector<int> labels;
  for (std::size_t k = tr.bootstrap; k < truth.size(); ++k) labels.push_back(truth[k] ? 1 : 0);
  return roc_auc(scores, labels);
}

// ---------------------------------------------------------------- detection

constexpr std::uint64_t kDetectionSeed = 2024;
constexpr std::size_t kDetectionTrips = 50;

ScenarioTemplate detection_template() {
  ScenarioTemplate t;
  t.base.trip_id = "det";
  t.duration_range = std::array<double, 2>{1500.0, 2400.0};
  t.random_start_clock = true;
  t.random_anomalies = 1;
  t.random_anomaly_multiplier = 8.0;
  return t;
}

struct DetectionSuite {
  ScenarioTemplate tmpl = detection_template();
  std::vector<TripRecord> trips;
  double render_seconds = 0.0;
};

DetectionSuite& detection_suite() {
  static DetectionSuite suite = [] {
    DetectionSuite s;
    const auto t0 = Clock::now();
    s.trips = render_suite(s.tmpl, kDetectionTrips, kDetectionSeed);
    s.render_seconds = seconds_since(t0);
    return s;
  }();
  return suite;
}

Outcome c1_htm_detection() {
  auto& suite = detection_suite();
  const PipelineConfig cfg;
  const auto t0 = Clock::now();
  std::map<Feature, std::vector<double>> per_feature;
  for (std::size_t i = 0; i < suite.trips.size(); ++i) {
    const auto tr = detect_trip(suite.trips[i], cfg);
    const auto f = anomaly_feature(suite.tmpl, i, kDetectionSeed);
    per_feature[f].push_back(trip_auc(suite.trips[i], tr, f));
  }
  const double runtime = seconds_since(t0) + suite.render_seconds;
  Outcome out;
  out.pass = runtime < 300.0;
  std::string parts;
  for (auto f : kFeatures) {
    const auto& v = per_feature[f];
    double mean = 0.0;
    for (double a : v) mean += a;
    mean = v.empty() ? 0.0 : mean / static_cast<double>(v.size());
    if (v.empty() || mean < 0.75) out.pass = false;
    parts += std::string(feature_name(f)) + "=" + fmt(mean, 3) + " (n=" + std::to_string(v.size()) + ") ";
  }
  out.summary = "HTM per-feature AUC >= 0.75 after 10-min bootstrap, runtime < 300 s: " + parts +
                "runtime=" + fmt(runtime, 1) + "s";
  return out;
}

Outcome c2_detector_ordering() {
  auto& suite = detection_suite();
  const PipelineConfig cfg;
  double htm = 0.0, expose = 0.0;
  for (std::size_t i = 0; i < suite.trips.size(); ++i) {
    const auto& trip = suite.trips[i];
    const auto n = windows(trip, cfg.smoother).size();
    const auto boot = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n)));
    const auto f = anomaly_feature(suite.tmpl, i, kDetectionSeed);
    htm += trip_auc(trip, detect_trip(trip, cfg, DetectorKind::htm, boot), f);
    expose += trip_auc(trip, detect_trip(trip, cfg, DetectorKind::expose, boot), f);
  }
  htm /= static_cast<double>(suite.trips.size());
  expose /= static_cast<double>(suite.trips.size());
  Outcome out;
  out.pass = htm > expose;
  out.summary = "mean AUC(HTM) > mean AUC(EXPoSE) with a 10% bootstrap: htm=" + fmt(htm, 3) +
                " expose=" + fmt(expose, 3);
  return out;
}

// ---------------------------------------------------------------- comfort model

constexpr std::uint64_t kComfortSeed = 77;

struct ComfortData {
  std::vector<DatasetTrip> trips;
  std::vector<LabeledFeature> train, validation, test;
  std::map<std::string, std::vector<LabeledFeature>> train_by, validation_by;
};

ComfortData& comfort_data() {
  static ComfortData d = [] {
    ComfortData out;
    ScenarioTemplate t;
    t.base.trip_id = "ride";
    t.duration_range = std::array<double, 2>{1500.0, 2400.0};
    t.random_start_clock = true;
    t.random_anomalies = 2;
    t.commuters = 10;
    t.profile_seed = 7;
    const PipelineConfig cfg;
    std::map<std::string, std::vector<std::string>> ids_by;
    for (auto& trip : render_suite(t, 60, kComfortSeed)) {
      DatasetTrip dt;
      dt.traces = detect_trip(trip, cfg);
      dt.features = labeled_features(trip, dt.traces);
      dt.trip = std::move(trip);
      ids_by[dt.trip.meta.commuter_id].push_back(dt.trip.meta.trip_id);
      out.trips.push_back(std::move(dt));
    }
    // 60/20/20 by whole trips, stratified by commuter so every commuter
    // has training data for its single-task model.
    std::map<std::string, int> part;
    for (const auto& [c, ids] : ids_by) {
      const auto s = split_trips(ids, cfg.seed);
      for (const auto& id : s.train) part[id] = 0;
      for (const auto& id : s.validation) part[id] = 1;
      for (const auto& id : s.test) part[id] = 2;
    }
    for (const auto& dt : out.trips) {
      const int p = part.at(dt.trip.meta.trip_id);
      auto& dst = p == 0 ? out.train : (p == 1 ? out.validation : out.test);
      dst.insert(dst.end(), dt.features.begin(), dt.features.end());
      if (p == 0) {
        auto& v = out.train_by[dt.trip.meta.commuter_id];
        v.insert(v.end(), dt.features.begin(), dt.features.end());
      } else if (p == 1) {
        auto& v = out.validation_by[dt.trip.meta.commuter_id];
        v.insert(v.end(), dt.features.begin(), dt.features.end());
      }
    }
    return out;
  }();
  return d;
}

MtlModel& base_model() {
  static MtlModel m = train_mtl(comfort_data().train, comfort_data().validation, TrainConfig{});
  return m;
}

double macro_auc(const std::vector<LabeledFeature>& data,
                 const std::function<IndicatorVector(const LabeledFeature&)>& predict) {
  std::vector<IndicatorVector> p;
  std::vector<int> y;
  for (const auto& lf : data) {
    p.push_back(predict(lf));
    y.push_back(lf.level);
  }
  return multiclass_auc(p, y).macro;
}

Outcome c3_mtl_vs_stl() {
  auto& d = comfort_data();
  const auto& mtl = base_model();
  std::map<std::string, MtlModel> stl;
  for (const auto& [c, data] : d.train_by) {
    const auto val = d.validation_by.count(c) ? d.validation_by.at(c) : std::vector<LabeledFeature>{};
    stl.emplace(c, stl_train(data, val, TrainConfig{}));
  }
  const double a_mtl = macro_auc(d.test, [&](const LabeledFeature& lf) { return mtl.forward(lf.commuter_id, lf.x); });
  const double a_stl =
      macro_auc(d.test, [&](const LabeledFeature& lf) { return stl.at(lf.commuter_id).forward(lf.commuter_id, lf.x); });
  Outcome out;
  out.pass = a_mtl - a_stl >= 0.03;
  out.summary = "10 commuters, macro AUC(MTL) - AUC(STL) >= 0.03: mtl=" + fmt(a_mtl, 3) + " stl=" + fmt(a_stl, 3) +
                " gap=" + fmt(a_mtl - a_stl, 3) + " (test windows=" + std::to_string(d.test.size()) + ")";
  return out;
}

Outcome c8_feedback_retrain() {
  auto model = base_model();
  ScenarioTemplate t;
  t.base.trip_id = "newc";
  t.duration_range = std::array<double, 2>{1500.0, 2400.0};
  t.random_start_clock = true;
  t.random_anomalies = 2;
  t.commuters = 25;
  t.commuter_offset = 10;
  t.profile_seed = 7;
  constexpr std::size_t kRounds = 5;  // trips per new commuter; the last is held out
  const PipelineConfig cfg;
  FeedbackQueue queue;
  std::vector<LabeledFeature> validation;
  std::size_t offered = 0;
  const auto trips = render_suite(t, 25 * kRounds, kComfortSeed + 1);
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const auto tr = detect_trip(trips[i], cfg);
    if (!tr.ready) continue;
    if (i / 25 + 1 < kRounds) {
      offered += collect_feedback(trips[i], tr, model, cfg, queue);
    } else {
      const auto lf = labeled_features(trips[i], tr);
      validation.insert(validation.end(), lf.begin(), lf.end());
    }
  }
  auto predict = [&](const LabeledFeature& lf) { return model.forward_or_population(lf.commuter_id, lf.x); };
  const double before = macro_auc(validation, predict);
  auto dataset = comfort_data().train;
  retrain(model, queue, dataset, TrainConfig{});
  const double after = macro_auc(validation, predict);
  Outcome out;
  out.pass = after > before;
  out.summary = "retraining on answered queries of 25 new commuters raises validation macro AUC: before=" +
                fmt(before, 3) + " after=" + fmt(after, 3) + " (labels=" + std::to_string(queue.answered_count()) +
                ", heads=" + std::to_string(model.head_count()) + ")";
  (void)offered;
  return out;
}

// ---------------------------------------------------------------- math oracles

Outcome c4_likelihood_math() {
  Outcome out;
  out.pass = true;
  double worst = 0.0;
  for (int i = -8000; i <= 8000; ++i) {
    const double z = i / 1000.0;
    worst = std::max(worst, std::abs(q_function(z) - 0.5 * std::erfc(z / std::numbers::sqrt2)));
  }
  if (worst > 1e-10) out.pass = false;
  const bool half = tail_likelihood(0.37, 0.37, 0.12) == 0.5 && tail_likelihood(0.0, 0.0, 0.0) == 0.5;
  if (!half) out.pass = false;
  // Bisection on the likelihood itself against the inverse normal oracle.
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail_likelihood(mid, 0.0, 1.0) >= 1.0 - 1e-5 ? hi : lo) = mid;
  }
  const double oracle = boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - 1e-5);
  if (std::abs(hi - 4.2649) > 0.001 || std::abs(hi - oracle) > 1e-6) out.pass = false;
  if (!(is_anomalous(tail_likelihood(hi, 0.0, 1.0)) && !is_anomalous(tail_likelihood(hi - 1e-4, 0.0, 1.0)))) {
    out.pass = false;
  }
  out.summary = "L=0.5 at the mean: " + std::string(half ? "yes" : "no") + "; crossing z=" + fmt(hi, 6) +
                " (inverse-normal oracle " + fmt(oracle, 6) + "); max |Q - erfc/2| on [-8,8]=" +
                [&] { std::ostringstream o; o << worst; return o.str(); }();
  return out;
}

Outcome c5_hawkes() {
  constexpr int runs = 1000;
  std::vector<double> n(runs), n0(runs);
  for (int r = 0; r < runs; ++r) {
    SeededRng a(mix_seed(501, r)), b(mix_seed(502, r));
    n[r] = static_cast<double>(simulate_hawkes({0.1, 0.5, 1.0}, 1000.0, a).size());
    n0[r] = static_cast<double>(simulate_hawkes({0.1, 0.0, 1.0}, 1000.0, b).size());
  }
  auto mean_var = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, s / static_cast<double>(v.size() - 1)};
  };
  const auto [m, var] = mean_var(n);
  const double se = std::sqrt(var / runs);
  const auto [m0, var0] = mean_var(n0);
  // Index of dispersion: sum (n - mean)^2 / mean ~ chi2(runs - 1) under Poisson.
  const double d = var0 * (runs - 1) / m0;
  const boost::math::chi_squared_distribution<double> chi(runs - 1);
  const double cdf = boost::math::cdf(chi, d);
  const double p = 2.0 * std::min(cdf, 1.0 - cdf);
  Outcome out;
  out.pass = std::abs(m - 200.0) <= 3.0 * se && p > 0.01;
  out.summary = "1000-run mean count=" + fmt(m, 2) + " (|mean-200| <= 3 SE, SE=" + fmt(se, 3) +
                "); alpha=0 dispersion p=" + fmt(p, 3) + " (> 0.01)";
  return out;
}

Outcome c6_gradient_check() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (int point = 0; point < 20; ++point) {
    SeededRng rng(mix_seed(606, point));
    MtlModel m(8, rng.next_u64(), {1800.0, 20.0});
    const int heads = 1 + static_cast<int>(rng.below(3));
    for (int h = 0; h < heads; ++h) m.register_commuter("c" + std::to_string(h));
    // Random parameters around the init scale, random batch.
    auto params = m.parameters();
    for (auto& p : params) p = rng.normal(0.0, 0.5);
    m.set_parameters(params);
    std::vector<Example> batch(8);
    for (auto& ex : batch) {
      ex.head = rng.below(static_cast<std::uint64_t>(heads));
      FeatureVector fv{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(0, 1800), rng.uniform(0, 20),
                       static_cast<int>(rng.below(4))};
      ex.input = model_input(fv, m.scale());
      ex.level = 1 + static_cast<int>(rng.below(5));
    }
    std::vector<double> grad;
    m.loss_and_gradient(batch, grad);
    const double h = 1e-5;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double keep = params[i];
      params[i] = keep + h;
      m.set_parameters(params);
      const double up = m.loss(batch);
      params[i] = keep - h;
      m.set_parameters(params);
      const double down = m.loss(batch);
      params[i] = keep;
      m.set_parameters(params);
      const double fd = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
      worst = std::max(worst, std::abs(fd - grad[i]) / denom);
      ++checked;
    }
  }
  Outcome out;
  out.pass = worst < 1e-4;
  std::ostringstream o;
  o << worst;
  out.summary = "backprop vs central differences at 20 random points, max relative error=" + o.str() + " over " +
                std::to_string(checked) + " parameters (< 1e-4)";
  return out;
}

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        den += 1.0;
        num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
  }
  return num / den;
}

Outcome c7_metrics() {
  Outcome out;
  out.pass = true;
  SeededRng rng(707);
  std::size_t cases = 0;
  double auc_err = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = (mask >> i) & 1u;
      for (int draw = 0; draw < 4; ++draw) {
        std::vector<double> s(n);
        for (auto& v : s) v = draw < 2 ? static_cast<double>(rng.below(3)) : rng.uniform();
        auc_err = std::max(auc_err, std::abs(roc_auc(s, y) - brute_auc(s, y)));
        ++cases;
      }
    }
  }
  if (auc_err > 1e-12) out.pass = false;

  const double agree = kendall_w({{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}});
  const double reverse = kendall_w({{1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}});
  if (agree != 1.0 || reverse != 0.0) out.pass = false;
  double w_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.below(5), n = 2 + rng.below(10);
    std::vector<std::vector<double>> r(m, std::vector<double>(n));
    std::vector<double> sums(n, 0.0);
    for (auto& row : r) {
      for (auto& v : row) v = rng.normal();
      for (std::size_t j = 0; j < n; ++j) {
        double rank = 1.0;
        for (std::size_t k = 0; k < n; ++k) rank += row[k] < row[j] ? 1.0 : 0.0;
        sums[j] += rank;
      }
    }
    const double mean = static_cast<double>(m * (n + 1)) / 2.0;
    double s = 0.0;
    for (double v : sums) s += (v - mean) * (v - mean);
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    w_err = std::max(w_err, std::abs(kendall_w(r) - 12.0 * s / (dm * dm * (dn * dn * dn - dn))));
  }
  if (w_err > 1e-12) out.pass = false;

  constexpr double a = 7.0, b = 0.1;
  const double pi4 = std::pow(std::numbers::pi, 4), pi8 = pi4 * pi4;
  const double v1 = 0.5 * std::pow(1.0 + b * pi4 / 5.0, 2);
  const double v2 = a * a / 8.0;
  const double v13 = 8.0 * b * b * pi8 / 225.0;
  const double var = v1 + v2 + v13;
  const double exact[3] = {(v1 + v13) / var, v2 / var, v13 / var};
  SeededRng srng(708);
  const double pi = std::numbers::pi;
  const auto sob = sobol_total_order(
      [](std::span<const double> x) { return std::sin(x[0]) + a * std::pow(std::sin(x[1]), 2) + b * std::pow(x[2], 4) * std::sin(x[0]); },
      {{-pi, pi}, {-pi, pi}, {-pi, pi}}, 16384, srng);
  double sob_err = 0.0;
  for (int i = 0; i < 3; ++i) sob_err = std::max(sob_err, std::abs(sob.total[i] - exact[i]));
  if (sob_err > 0.05) out.pass = false;
  std::ostringstream o;
  o << "roc_auc vs brute force on " << cases << " exhaustive cases (max err " << auc_err << "); W agree/reverse="
    << agree << "/" << reverse << ", formula max err " << w_err << "; Ishigami totals " << fmt(sob.total[0], 3) << "/"
    << fmt(sob.total[1], 3) << "/" << fmt(sob.total[2], 3) << " vs " << fmt(exact[0], 3) << "/" << fmt(exact[1], 3)
    << "/" << fmt(exact[2], 3) << " (max err " << fmt(sob_err, 3) << " <= 0.05)";
  out.summary = o.str();
  return out;
}

// ---------------------------------------------------------------- contracts

std::string g_cli;

bool run_cli(const std::string& args) {
  const std::string cmd = "\"" + g_cli + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

Outcome c9_determinism() {
  Outcome out;
  out.pass = true;
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      failed.push_back(what);
    }
  };

  SeededRng rng(909);
  bool round_trip = true;
  for (int i = 0; i < 500; ++i) {
    const auto rec = rc_test::random_trip(rng, 1 + rng.below(60));
    std::istringstream in(format_trip(rec));
    const auto back = parse_trip(in);
    round_trip = round_trip && back == rec && format_trip(back) == format_trip(rec);
  }
  check(round_trip, "trip parse/write");

  rc_test::TempDir dir("accept-det");
  write_file_atomic(dir / "s.scn",
                    "trip_id = r\nduration = 900 1000\nrandom_anomalies = 1\nrandom_anomaly_earliest = 200\n"
                    "commuters = 2\n");
  PipelineConfig cfg;
  cfg.bootstrap_minutes = 2.0;
  cfg.train.epochs = 10;
  cfg.sobol_samples = 256;
  const auto a = cmd_synth(dir / "s.scn", 8, 5, dir / "a");
  const auto b = cmd_synth(dir / "s.scn", 8, 5, dir / "b");
  bool synth_same = a.size() == b.size();
  for (std::size_t i = 0; synth_same && i < a.size(); ++i) synth_same = read_file(a[i]) == read_file(b[i]);
  check(synth_same, "synth");
  check(cmd_extract(a[0], cfg) == cmd_extract(b[0], cfg), "extract");
  std::string ca, cb;
  check(cmd_detect(a[0], cfg, &ca).str() == cmd_detect(a[0], cfg, &cb).str() && ca == cb, "detect");
  cmd_train(dir / "a", cfg, dir / "m1.json");
  cmd_train(dir / "b", cfg, dir / "m2.json");
  check(read_file(dir / "m1.json") == read_file(dir / "m2.json"), "train checkpoint");
  check(cmd_eval(dir / "a", dir / "m1.json", cfg).str() == cmd_eval(dir / "b", dir / "m2.json", cfg).str(), "eval");
  check(format_trip_report(cmd_run(a[0], dir / "m1.json", cfg)) ==
            format_trip_report(cmd_run(b[0], dir / "m2.json", cfg)),
        "run");
  check(cmd_rate(a[1], dir / "m1.json", cfg).str() == cmd_rate(b[1], dir / "m1.json", cfg).str(), "rate");

  const auto m = MtlModel::load(dir / "m1.json");
  m.save(dir / "m3.json");
  check(read_file(dir / "m3.json") == read_file(dir / "m1.json"), "model save/load");

  HtmConfig hc;
  hc.encoder = {0.0, 35.0, 130, 21, true};
  HtmDetector d(hc, 3);
  SeededRng xr(1);
  for (int i = 0; i < 100; ++i) d.step(xr.uniform(0, 35));
  d.save(dir / "h.json");
  auto restored = HtmDetector::load(dir / "h.json");
  bool htm_same = true;
  for (int i = 0; i < 50; ++i) {
    const double x = xr.uniform(0, 35);
    htm_same = htm_same && d.step(x) == restored.step(x);
  }
  check(htm_same, "HTM checkpoint");

  std::string cli_note = "cli not checked";
  if (!g_cli.empty()) {
    const auto scn = (dir / "s.scn").string();
    const auto o1 = (dir / "c1").string(), o2 = (dir / "c2").string();
    bool ok = run_cli("--seed 4 --out " + o1 + " synth " + scn + " -n 3") &&
              run_cli("--seed 4 --out " + o2 + " synth " + scn + " -n 3");
    if (ok) {
      for (const auto& e : std::filesystem::directory_iterator(o1)) {
        ok = ok && read_file(e.path()) == read_file(std::filesystem::path(o2) / e.path().filename());
      }
      const auto t = (std::filesystem::path(o1) / "r-0000.trip").string();
      ok = ok && run_cli("--out " + (dir / "d1").string() + " detect --csv " + t) &&
           run_cli("--out " + (dir / "d2").string() + " detect --csv " + t) &&
           read_file(dir / "d1" / "r-0000.trace.csv") == read_file(dir / "d2" / "r-0000.trace.csv");
      ok = ok && !run_cli("--out " + (dir / "x").string() + " run " + t + " " + (dir / "missing.json").string());
    }
    check(ok, "cli");
    cli_note = "cli checked";
  }

  std::string list;
  for (const auto& f : failed) list += " " + f;
  out.summary = "byte-identical commands, checkpoints and trip files under fixed seeds (" + cli_note + ")" +
                (failed.empty() ? "" : "; failed:" + list);
  return out;
}

Outcome c10_contracts() {
  Outcome out;
  out.pass = true;
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      failed.push_back(what);
    }
  };
  check(relabel(1, RelabelScheme::five_to_three) == 1 && relabel(2, RelabelScheme::five_to_three) == 1 &&
            relabel(3, RelabelScheme::five_to_three) == 2 && relabel(4, RelabelScheme::five_to_three) == 3 &&
            relabel(5, RelabelScheme::five_to_three) == 3,
        "five_to_three");
  check(relabel(1, RelabelScheme::six_to_three) == 1 && relabel(2, RelabelScheme::six_to_three) == 1 &&
            relabel(3, RelabelScheme::six_to_three) == 2 && relabel(4, RelabelScheme::six_to_three) == 2 &&
            relabel(5, RelabelScheme::six_to_three) == 3 && relabel(6, RelabelScheme::six_to_three) == 3,
        "six_to_three");
  check(CongestionTracker::kMediumCycle == 60.0 && CongestionTracker::kHighCycle == 300.0 &&
            CongestionTracker::level_for_cycle(59.9) == 0 && CongestionTracker::level_for_cycle(60.0) == 1 &&
            CongestionTracker::level_for_cycle(299.9) == 1 && CongestionTracker::level_for_cycle(300.0) == 2,
        "congestion thresholds");
  const std::pair<int, int> zones[] = {{6, 0}, {9, 0}, {10, 1}, {15, 1}, {16, 2}, {21, 2}, {22, 3}, {2, 3}, {5, 3}};
  bool zones_ok = true;
  for (auto [hour, zone] : zones) zones_ok = zones_ok && time_zone({hour, 0}, 0.0) == zone;
  check(zones_ok, "time zones");
  check(is_anomalous(1.0 - 1e-5) && !is_anomalous(std::nextafter(1.0 - 1e-5, 0.0)), "epsilon rule");
  check(PipelineConfig{}.bootstrap_minutes == 10.0 && bootstrap_windows(10.0, 5.0) == 120, "bootstrap");
  check(!should_query({{0.30, 0.20, 0.20, 0.15, 0.15}}) && should_query({{0.25, 0.24, 0.21, 0.15, 0.15}}),
        "query gap");
  std::string list;
  for (const auto& f : failed) list += " " + f;
  out.summary = "Likert relabelings, congestion thresholds (1/5 min), time-zone table, epsilon rule, 10-min "
                "bootstrap, 0.1 query gap" +
                (failed.empty() ? "" : "; failed:" + list);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else {
      only.insert(a);
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1", c1_htm_detection}, {"C2", c2_detector_ordering}, {"C3", c3_mtl_vs_stl},
      {"C4", c4_likelihood_math}, {"C5", c5_hawkes},         {"C6", c6_gradient_check},
      {"C7", c7_metrics},        {"C8", c8_feedback_retrain}, {"C9", c9_determinism},
      {"C10", c10_contracts}};
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << ": " << o.summary << " [" << fmt(seconds_since(t0), 1)
              << "s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
