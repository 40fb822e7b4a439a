#include "afrrcast/shap/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

std::vector<std::string> ImportanceTable::by_rank() const {
  std::vector<std::string> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    out[static_cast<std::size_t>(rank[i] - 1)] = features[i];
  return out;
}

ImportanceTable importance(std::span<const Explanation> explanations,
                           const std::vector<std::string>& features) {
  if (explanations.empty()) throw DataError("importance: empty explanation set");
  for (const Explanation& e : explanations)
    if (e.phi.size() != features.size())
      throw DataError("importance: inconsistent explanation layouts");

  ImportanceTable table;
  table.features = features;
  table.mean_abs_shap.assign(features.size(), 0.0);
  for (const Explanation& e : explanations)
    for (std::size_t f = 0; f < features.size(); ++f)
      table.mean_abs_shap[f] += std::fabs(e.phi[f]);
  for (double& v : table.mean_abs_shap) v /= static_cast<double>(explanations.size());

  // Descending importance; ties keep feature order.
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.mean_abs_shap[a] > table.mean_abs_shap[b];
  });
  table.rank.assign(features.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    table.rank[order[pos]] = static_cast<int>(pos) + 1;
  return table;
}

DependencyData dependency_data(std::span<const Explanation> explanations,
                               std::span<const double> feature_values,
                               const std::string& feature,
                               const std::vector<std::string>& features) {
  const auto it = std::find(features.begin(), features.end(), feature);
  if (it == features.end()) throw DataError("dependency_data: unknown feature '" + feature + "'");
  const std::size_t f = static_cast<std::size_t>(it - features.begin());
  if (feature_values.size() != explanations.size())
    throw DataError("dependency_data: rows misaligned");

  DependencyData out;
  out.feature = feature;
  out.values.reserve(explanations.size());
  out.phi.reserve(explanations.size());
  out.value_missing.reserve(explanations.size());
  for (std::size_t r = 0; r < explanations.size(); ++r) {
    if (explanations[r].phi.size() != features.size())
      throw DataError("dependency_data: inconsistent explanation layouts");
    out.values.push_back(feature_values[r]);
    out.phi.push_back(explanations[r].phi[f]);
    out.value_missing.push_back(is_missing(feature_values[r]));
  }
  return out;
}

}  // namespace afrrcast
