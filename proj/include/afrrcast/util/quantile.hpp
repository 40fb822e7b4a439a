#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "afrrcast/errors.hpp"

namespace afrrcast {

/// Empirical quantile with linear interpolation between order statistics:
/// for n values and level q, h = (n-1)*q and the result interpolates between
/// sorted[floor(h)] and sorted[floor(h)+1]. This single rule is used for
/// quantile base scores, leaf renewal and the daily-profile baseline.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("quantile of empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Same rule on an unsorted sample (copies and sorts).
inline double quantile_linear(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

inline double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace afrrcast
