#pragma once

#include <span>
#include <vector>

namespace ridecomfort {

/// Ranks 1..n with tied values sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Kendall's coefficient of concordance for m systems (rows) rating the
/// same n items (columns): W = 12 sum (R_i - mean R)^2 / (m^2 (n^3 - n)),
/// without tie correction. Throws UndefinedMetricError for m < 2 or n < 2.
double kendall_w(const std::vector<std::vector<double>>& ratings);

}  // namespace ridecomfort
