#include <benchmark/benchmark.h>

#include "ridecomfort/expose.hpp"
#include "ridecomfort/features.hpp"
#include "ridecomfort/htm_detector.hpp"
#include "ridecomfort/mtl_model.hpp"
#include "ridecomfort/relative_entropy.hpp"
#include "ridecomfort/synth.hpp"

using namespace ridecomfort;

namespace {

ScenarioScript bench_script(double duration) {
  ScenarioScript s;
  s.trip_duration = duration;
  s.anomaly_intervals.push_back({duration / 2, duration / 2 + 300.0, Feature::jerk, 8.0});
  return s;
}

std::vector<double> speed_stream(std::size_t n) {
  SeededRng rng(1);
  std::vector<double> v(n);
  double x = 12.0;
  for (auto& e : v) {
    x = std::clamp(x + rng.normal(0.0, 0.5), 0.0, 35.0);
    e = x;
  }
  return v;
}

}  // namespace

static void BM_HtmStep(benchmark::State& state) {
  HtmConfig cfg;
  cfg.encoder = {0.0, 35.0, 130, 21, true};
  HtmDetector d(cfg, 1);
  const auto xs = speed_stream(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.step(xs[i++ % xs.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HtmStep);

static void BM_RelativeEntropyStep(benchmark::State& state) {
  RelativeEntropyDetector d;
  const auto xs = speed_stream(4096);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(d.step(xs[i++ % xs.size()]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RelativeEntropyStep);

static void BM_ExposeStep(benchmark::State& state) {
  ExposeDetector d;
  const auto xs = speed_stream(4096);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(d.step(xs[i++ % xs.size()]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExposeStep);

static void BM_MtlForward(benchmark::State& state) {
  MtlModel m(32, 1, {1800.0, 20.0});
  for (int c = 0; c < state.range(0); ++c) m.register_commuter("c" + std::to_string(c));
  const FeatureVector fv{0.3, 0.6, 0.1, 900.0, 8.0, 2};
  for (auto _ : state) benchmark::DoNotOptimize(m.forward("c0", fv));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MtlForward)->Arg(1)->Arg(30);

static void BM_MtlPopulationForward(benchmark::State& state) {
  MtlModel m(32, 1, {1800.0, 20.0});
  for (int c = 0; c < 30; ++c) m.register_commuter("c" + std::to_string(c));
  const FeatureVector fv{0.3, 0.6, 0.1, 900.0, 8.0, 2};
  for (auto _ : state) benchmark::DoNotOptimize(m.forward_population(fv));
}
BENCHMARK(BM_MtlPopulationForward);

static void BM_RenderTrip(benchmark::State& state) {
  const auto s = bench_script(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    SeededRng rng(3);
    benchmark::DoNotOptimize(render_trip(s, rng));
  }
}
BENCHMARK(BM_RenderTrip)->Arg(1800)->Unit(benchmark::kMillisecond);

static void BM_Windows(benchmark::State& state) {
  SeededRng rng(3);
  const auto trip = render_trip(bench_script(1800.0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(windows(trip));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trip.samples.size()));
}
BENCHMARK(BM_Windows)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
