#pragma once

#include <span>
#include <string>
#include <vector>

#include "afrrcast/shap/tree_shap.hpp"

namespace afrrcast {

/// Global ranking by mean absolute SHAP value over an evaluation set.
struct ImportanceTable {
  std::vector<std::string> features;
  std::vector<double> mean_abs_shap;
  std::vector<int> rank;  // 1 = most important; ranks are a permutation

  /// Feature names ordered by rank.
  std::vector<std::string> by_rank() const;
};

ImportanceTable importance(std::span<const Explanation> explanations,
                           const std::vector<std::string>& features);

/// (feature value, SHAP value) pairs for one feature, row order preserved;
/// drives dependency plots.
struct DependencyData {
  std::string feature;
  std::vector<double> values;
  std::vector<double> phi;
  std::vector<bool> value_missing;
};

DependencyData dependency_data(std::span<const Explanation> explanations,
                               std::span<const double> feature_values,
                               const std::string& feature,
                               const std::vector<std::string>& features);

}  // namespace afrrcast
