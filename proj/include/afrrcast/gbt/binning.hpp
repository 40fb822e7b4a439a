#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "afrrcast/features/variant.hpp"

namespace afrrcast {

/// Histogram bins of one feature. Finite values map to bins 0..n_bins()-1
/// via ascending cut points (bin b holds values <= cuts[b], last bin
/// unbounded); missing values map to the dedicated bin missing_bin().
struct ColumnBins {
  std::vector<double> cuts;
  bool all_missing = false;

  int n_bins() const { return static_cast<int>(cuts.size()) + 1; }
  int missing_bin() const { return n_bins(); }
  int bin_of(double value) const;
};

struct Binning {
  std::vector<ColumnBins> per_feature;
};

/// Bin ids per feature, column-major, aligned with the source matrix rows.
struct BinnedMatrix {
  std::vector<std::vector<std::uint16_t>> feature_bins;
  std::size_t n_rows = 0;
};

/// Quantile-based edges over the non-missing values; when a feature has at
/// most max_bins distinct values the bins are exact (midpoint cuts between
/// consecutive distinct values, no information loss). An all-missing column
/// gets a single missing bin.
std::pair<BinnedMatrix, Binning> bin_features(const FeatureMatrix& matrix, int max_bins);

}  // namespace afrrcast
