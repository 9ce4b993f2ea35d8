#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ridecomfort/atomic_file.hpp"
#include "ridecomfort/commands.hpp"
#include "ridecomfort/error.hpp"

namespace fs = std::filesystem;
using namespace ridecomfort;

namespace {

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string detector;
  std::string out;
};

PipelineConfig resolve(const Options& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.detector.empty()) cfg.detector = parse_detector_kind(o.detector);
  validate(cfg);
  return cfg;
}

// Report to stdout, or to <out>/<name> when --out is set.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(o.out);
  write_file_atomic(fs::path(o.out) / name, text);
  std::cout << (fs::path(o.out) / name).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ridecomfort: ride comfort estimation from smartphone trip traces"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Random seed (overrides the config)");
  app.add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--detector", o.detector, "Anomaly detector: htm, re or expose")
      ->check(CLI::IsMember({"htm", "re", "expose"}));
  app.add_option("--out", o.out, "Output directory");

  std::string scenario;
  std::size_t count = 1;
  auto* synth = app.add_subcommand("synth", "Render synthetic trips from a scenario file");
  synth->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  synth->add_option("-n,--count", count, "Number of trips");

  std::string trip;
  bool with_csv = false;
  auto* extract = app.add_subcommand("extract", "Per-window features of a trip as CSV");
  extract->add_option("trip", trip)->required()->check(CLI::ExistingFile);
  auto* detect = app.add_subcommand("detect", "Anomaly likelihoods for a trip");
  detect->add_option("trip", trip)->required()->check(CLI::ExistingFile);
  detect->add_flag("--csv", with_csv, "Also write the per-window trace CSV");

  std::string dataset;
  std::string model;
  auto* train = app.add_subcommand("train", "Train the comfort model on a labeled trip directory");
  train->add_option("dataset", dataset)->required()->check(CLI::ExistingDirectory);
  train->add_option("-m,--model", model, "Checkpoint path (default <out>/model.json)");

  std::string queue;
  auto* run = app.add_subcommand("run", "Per-window comfort levels, rating and impacts for a trip");
  run->add_option("trip", trip)->required()->check(CLI::ExistingFile);
  run->add_option("model", model)->required()->check(CLI::ExistingFile);
  run->add_option("-q,--queue", queue, "Feedback query queue file");

  auto* eval = app.add_subcommand("eval", "Evaluate a model on the test split of a dataset");
  eval->add_option("dataset", dataset)->required()->check(CLI::ExistingDirectory);
  eval->add_option("model", model)->required()->check(CLI::ExistingFile);

  auto* rate = app.add_subcommand("rate", "Trip rating only");
  rate->add_option("trip", trip)->required()->check(CLI::ExistingFile);
  rate->add_option("model", model)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = resolve(o);
    const auto stem = fs::path(trip).stem().string();
    if (*synth) {
      const fs::path dir = o.out.empty() ? cfg.trips_dir : fs::path(o.out);
      for (const auto& p : cmd_synth(scenario, count, cfg.seed, dir)) std::cout << p.string() << '\n';
    } else if (*extract) {
      emit(o, stem + ".features.csv", cmd_extract(trip, cfg));
    } else if (*detect) {
      std::string csv;
      const auto report = cmd_detect(trip, cfg, with_csv ? &csv : nullptr);
      if (with_csv) {
        const fs::path dir = o.out.empty() ? cfg.reports_dir : fs::path(o.out);
        fs::create_directories(dir);
        write_file_atomic(dir / (stem + ".trace.csv"), csv);
      }
      emit(o, stem + ".detect.txt", report.str());
    } else if (*train) {
      if (model.empty()) model = ((o.out.empty() ? cfg.models_dir : fs::path(o.out)) / "model.json").string();
      if (fs::path(model).has_parent_path()) fs::create_directories(fs::path(model).parent_path());
      std::cout << cmd_train(dataset, cfg, model).str();
    } else if (*run) {
      emit(o, stem + ".run.txt", format_trip_report(cmd_run(trip, model, cfg, queue)));
    } else if (*eval) {
      emit(o, "eval.txt", cmd_eval(dataset, model, cfg).str());
    } else if (*rate) {
      emit(o, stem + ".rate.txt", cmd_rate(trip, model, cfg).str());
    }
  } catch (const UnregisteredCommuterError& e) {
    std::cerr << "error: " << e.what() << " (retrain the model with this commuter's labeled trips)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
