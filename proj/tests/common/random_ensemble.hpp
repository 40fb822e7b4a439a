#pragma once

// Random tree-ensemble fixtures shared by the unit and acceptance suites.
// Covers are generated consistently (parent = left + right, all positive)
// and features repeat along paths, which exercises the single-player
// merge in the attribution recursion.

#include <cmath>

#include "afrrcast/gbt/tree.hpp"
#include "afrrcast/timetable.hpp"
#include "afrrcast/util/rng.hpp"

namespace afrrcast::testing {

inline int random_subtree(Rng& rng, Tree& tree, int depth, double cover, int n_features) {
  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back({});
  tree.nodes.back().cover = cover;
  const bool leaf = depth == 0 || cover < 2.0 || rng.uniform() < 0.25;
  if (leaf) {
    tree.nodes[static_cast<std::size_t>(id)].value = rng.uniform(-5.0, 5.0);
    return id;
  }
  const double left_cover = 1.0 + std::floor(rng.uniform() * (cover - 1.0));
  const int feature = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_features)));
  const double threshold = rng.uniform();
  const bool default_left = rng.uniform() < 0.5;
  const int left = random_subtree(rng, tree, depth - 1, left_cover, n_features);
  const int right = random_subtree(rng, tree, depth - 1, cover - left_cover, n_features);
  TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
  node.feature = feature;
  node.threshold = threshold;
  node.default_left = default_left;
  node.left = left;
  node.right = right;
  return id;
}

inline Ensemble random_ensemble(Rng& rng, int max_trees, int max_depth, int n_features) {
  Ensemble e;
  e.base_score = rng.uniform(-2.0, 2.0);
  for (int f = 0; f < n_features; ++f) e.feature_names.push_back("f" + std::to_string(f));
  const int n_trees = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_trees)));
  for (int t = 0; t < n_trees; ++t) {
    Tree tree;
    const double cover = 20.0 + std::floor(rng.uniform() * 100.0);
    random_subtree(rng, tree, max_depth, cover, n_features);
    e.trees.push_back(std::move(tree));
  }
  return e;
}

inline std::vector<double> random_row(Rng& rng, int n_features, double missing_fraction) {
  std::vector<double> row(static_cast<std::size_t>(n_features));
  for (double& v : row) v = rng.uniform() < missing_fraction ? kMissing : rng.uniform();
  return row;
}

}  // namespace afrrcast::testing
