#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace hebblsys::stats {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1); 0 for a single value.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return xs.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Coefficient of variation; NaN unless the mean is positive.
inline double cv(std::span<const double> xs) {
  const double m = mean(xs);
  if (!(m > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return sample_sd(xs) / m;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

}  // namespace hebblsys::stats
