#include "afrrcast/gbt/binning.hpp"

#include <algorithm>

#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

int ColumnBins::bin_of(double value) const {
  if (is_missing(value)) return missing_bin();
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), value);
  return static_cast<int>(it - cuts.begin());
}

namespace {

ColumnBins build_bins(std::span<const double> values, int max_bins) {
  ColumnBins bins;
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values)
    if (!is_missing(v)) finite.push_back(v);
  if (finite.empty()) {
    bins.all_missing = true;
    return bins;
  }
  std::sort(finite.begin(), finite.end());

  // Distinct values with multiplicities.
  std::vector<double> distinct;
  std::vector<std::size_t> counts;
  for (double v : finite) {
    if (distinct.empty() || v != distinct.back()) {
      distinct.push_back(v);
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }

  if (static_cast<int>(distinct.size()) <= max_bins) {
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
      bins.cuts.push_back(distinct[i] + 0.5 * (distinct[i + 1] - distinct[i]));
    return bins;
  }

  // Equal-frequency cuts over the distinct-value histogram.
  const double per_bin = static_cast<double>(finite.size()) / max_bins;
  std::size_t cum = 0;
  int made = 0;
  for (std::size_t i = 0; i + 1 < distinct.size() && made + 1 < max_bins; ++i) {
    cum += counts[i];
    if (static_cast<double>(cum) >= per_bin * (made + 1)) {
      bins.cuts.push_back(distinct[i] + 0.5 * (distinct[i + 1] - distinct[i]));
      ++made;
    }
  }
  return bins;
}

}  // namespace

std::pair<BinnedMatrix, Binning> bin_features(const FeatureMatrix& matrix, int max_bins) {
  if (max_bins < 2) throw UsageError("bin_features: max_bins must be >= 2");
  if (max_bins > 60000) throw UsageError("bin_features: max_bins too large");

  Binning binning;
  BinnedMatrix binned;
  binned.n_rows = matrix.n_rows();
  binning.per_feature.reserve(matrix.n_cols());
  binned.feature_bins.reserve(matrix.n_cols());

  for (std::size_t f = 0; f < matrix.n_cols(); ++f) {
    ColumnBins bins = build_bins(matrix.columns[f], max_bins);
    std::vector<std::uint16_t> ids(matrix.n_rows());
    for (std::size_t r = 0; r < matrix.n_rows(); ++r)
      ids[r] = static_cast<std::uint16_t>(bins.bin_of(matrix.columns[f][r]));
    binning.per_feature.push_back(std::move(bins));
    binned.feature_bins.push_back(std::move(ids));
  }
  return {std::move(binned), std::move(binning)};
}

}  // namespace afrrcast
