#include "ridecomfort/kendall.hpp"

#include <algorithm>
#include <numeric>

#include "ridecomfort/error.hpp"

namespace ridecomfort {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double kendall_w(const std::vector<std::vector<double>>& ratings) {
  const std::size_t m = ratings.size();
  if (m < 2) throw UndefinedMetricError("Kendall's W needs at least two rating systems");
  const std::size_t n = ratings.front().size();
  if (n < 2) throw UndefinedMetricError("Kendall's W needs at least two items");
  std::vector<double> totals(n, 0.0);
  for (const auto& row : ratings) {
    if (row.size() != n) throw ValidationError("ratings", "every system must rate the same items");
    const auto r = average_ranks(row);
    for (std::size_t i = 0; i < n; ++i) totals[i] += r[i];
  }
  const double mean = std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(n);
  double s = 0.0;
  for (double t : totals) s += (t - mean) * (t - mean);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return 12.0 * s / (md * md * (nd * nd * nd - nd));
}

}  // namespace ridecomfort
