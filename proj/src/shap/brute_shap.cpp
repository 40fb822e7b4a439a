#include "afrrcast/shap/brute_shap.hpp"

#include <bit>
#include <vector>

#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

namespace {

double descend(const Tree& tree, int node_id, std::span<const double> row,
               unsigned subset_mask) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
  if (node.is_leaf()) return node.value;
  if (!(node.cover > 0.0)) throw Error("brute_shap: internal node with zero cover");
  if (subset_mask & (1u << static_cast<unsigned>(node.feature))) {
    const double v = row[static_cast<std::size_t>(node.feature)];
    const bool go_left = is_missing(v) ? node.default_left : v <= node.threshold;
    return descend(tree, go_left ? node.left : node.right, row, subset_mask);
  }
  const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
  const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
  return (l.cover * descend(tree, node.left, row, subset_mask) +
          r.cover * descend(tree, node.right, row, subset_mask)) /
         node.cover;
}

}  // namespace

double subset_expectation(const Ensemble& ensemble, std::span<const double> row,
                          unsigned subset_mask) {
  double out = ensemble.base_score;
  for (const Tree& tree : ensemble.trees) out += descend(tree, 0, row, subset_mask);
  return out;
}

Explanation brute_shap(const Ensemble& ensemble, std::span<const double> row, int max_features) {
  const int n = static_cast<int>(ensemble.feature_names.size());
  if (n > max_features)
    throw UsageError("brute_shap: " + std::to_string(n) + " features exceed the limit of " +
                     std::to_string(max_features));
  if (row.size() != ensemble.feature_names.size())
    throw DataError("brute_shap: row length does not match feature count");

  const unsigned n_subsets = 1u << static_cast<unsigned>(n);
  std::vector<double> value(n_subsets);
  for (unsigned mask = 0; mask < n_subsets; ++mask)
    value[mask] = subset_expectation(ensemble, row, mask);

  // Shapley weights |S|! (n-|S|-1)! / n!.
  std::vector<double> weight(static_cast<std::size_t>(n));
  {
    std::vector<double> factorial(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i)
      factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;
    for (int s = 0; s < n; ++s)
      weight[static_cast<std::size_t>(s)] =
          factorial[static_cast<std::size_t>(s)] * factorial[static_cast<std::size_t>(n - s - 1)] /
          factorial[static_cast<std::size_t>(n)];
  }

  Explanation exp;
  exp.phi.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const unsigned bit = 1u << static_cast<unsigned>(i);
    for (unsigned mask = 0; mask < n_subsets; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      exp.phi[static_cast<std::size_t>(i)] +=
          weight[static_cast<std::size_t>(size)] * (value[mask | bit] - value[mask]);
    }
  }
  exp.base_value = value[0];
  exp.prediction = ensemble.predict_row(row);
  return exp;
}

}  // namespace afrrcast
