#include "ridecomfort/sobol.hpp"

#include <cmath>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

namespace {

struct Evaluations {
  std::vector<double> fa;
  std::vector<double> fb;
  std::vector<std::vector<double>> fab;  // [input][row]
};

double total_index(const Evaluations& e, std::size_t input, const std::vector<std::size_t>& rows) {
  double mean = 0.0;
  for (auto r : rows) mean += e.fa[r] + e.fb[r];
  mean /= 2.0 * static_cast<double>(rows.size());
  double var = 0.0;
  for (auto r : rows) {
    var += (e.fa[r] - mean) * (e.fa[r] - mean) + (e.fb[r] - mean) * (e.fb[r] - mean);
  }
  var /= 2.0 * static_cast<double>(rows.size());
  if (!(var > 0.0)) return std::nan("");
  double s = 0.0;
  for (auto r : rows) {
    const double d = e.fa[r] - e.fab[input][r];
    s += d * d;
  }
  return s / static_cast<double>(rows.size()) / (2.0 * var);
}

}  // namespace

SobolResult sobol_total_order(const SobolModel& model, const std::vector<std::pair<double, double>>& ranges,
                              std::size_t n, SeededRng& rng, std::size_t bootstrap) {
  if (n < 256) throw ValidationError("samples", "need N >= 256");
  if (ranges.empty()) throw ValidationError("ranges", "need at least one input");
  const std::size_t k = ranges.size();
  for (const auto& [lo, hi] : ranges) {
    if (!(hi > lo)) throw ValidationError("ranges", "each range needs hi > lo");
  }

  std::vector<std::vector<double>> a(n, std::vector<double>(k));
  std::vector<std::vector<double>> b(n, std::vector<double>(k));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < k; ++i) a[r][i] = rng.uniform(ranges[i].first, ranges[i].second);
    for (std::size_t i = 0; i < k; ++i) b[r][i] = rng.uniform(ranges[i].first, ranges[i].second);
  }

  Evaluations e;
  e.fa.resize(n);
  e.fb.resize(n);
  e.fab.assign(k, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    e.fa[r] = model(a[r]);
    e.fb[r] = model(b[r]);
    auto mixed = a[r];
    for (std::size_t i = 0; i < k; ++i) {
      mixed[i] = b[r][i];
      e.fab[i][r] = model(mixed);
      mixed[i] = a[r][i];
    }
  }

  std::vector<std::size_t> all(n);
  for (std::size_t r = 0; r < n; ++r) all[r] = r;
  SobolResult out;
  out.samples = n;
  out.evaluations = n * (k + 2);
  for (std::size_t i = 0; i < k; ++i) {
    const double st = total_index(e, i, all);
    if (std::isnan(st)) throw UndefinedMetricError("Sobol index undefined: model output has zero variance");
    out.total.push_back(st);
  }

  std::vector<std::vector<double>> boot(k);
  std::vector<std::size_t> rows(n);
  for (std::size_t b_i = 0; b_i < bootstrap; ++b_i) {
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    for (std::size_t i = 0; i < k; ++i) {
      const double st = total_index(e, i, rows);
      if (!std::isnan(st)) boot[i].push_back(st);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    double hw = 0.0;
    if (boot[i].size() > 1) {
      double m = 0.0;
      for (double v : boot[i]) m += v;
      m /= static_cast<double>(boot[i].size());
      double ss = 0.0;
      for (double v : boot[i]) ss += (v - m) * (v - m);
      hw = 1.96 * std::sqrt(ss / static_cast<double>(boot[i].size() - 1));
    }
    out.half_width.push_back(hw);
  }
  return out;
}

}  // namespace ridecomfort
