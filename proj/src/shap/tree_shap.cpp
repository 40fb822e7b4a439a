#include "afrrcast/shap/tree_shap.hpp"

#include <cmath>

#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"
#include "afrrcast/util/parallel.hpp"

namespace afrrcast {

namespace {

void check_covers(const Tree& tree) {
  // Zero-cover nodes would put 0/0 into the descent weights.
  for (const TreeNode& n : tree.nodes)
    if (!(n.cover > 0.0) || !std::isfinite(n.cover))
      throw Error("tree_shap: node cover missing or zero");
}

/// One step of the subset-path bookkeeping. Each element represents a
/// feature encountered on the way down: zero_fraction is the cover share
/// that would flow through when the feature is excluded from the subset,
/// one_fraction is 1 or 0 depending on whether the row follows the branch,
/// and pweight carries the permutation weights for every subset size.
struct PathElement {
  int feature = -1;
  double zero_fraction = 1.0;
  double one_fraction = 1.0;
  double pweight = 1.0;
};

using Path = std::vector<PathElement>;

void extend(Path& path, double zero_fraction, double one_fraction, int feature) {
  path.push_back({feature, zero_fraction, one_fraction, path.empty() ? 1.0 : 0.0});
  const int d = static_cast<int>(path.size()) - 1;  // index of the new element
  for (int i = d - 1; i >= 0; --i) {
    path[static_cast<std::size_t>(i + 1)].pweight +=
        one_fraction * path[static_cast<std::size_t>(i)].pweight * (i + 1) / (d + 1);
    path[static_cast<std::size_t>(i)].pweight =
        zero_fraction * path[static_cast<std::size_t>(i)].pweight * (d - i) / (d + 1);
  }
}

/// Inverse of extend for the element at `index`; valid because the pweights
/// are symmetric in the extensions applied.
void unwind(Path& path, std::size_t index) {
  const int d = static_cast<int>(path.size()) - 1;
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[static_cast<std::size_t>(d)].pweight;

  for (int i = d - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = path[static_cast<std::size_t>(i)].pweight;
      path[static_cast<std::size_t>(i)].pweight =
          next_one_portion * (d + 1) / ((i + 1) * one_fraction);
      next_one_portion =
          tmp - path[static_cast<std::size_t>(i)].pweight * zero_fraction * (d - i) / (d + 1);
    } else {
      path[static_cast<std::size_t>(i)].pweight =
          path[static_cast<std::size_t>(i)].pweight * (d + 1) / (zero_fraction * (d - i));
    }
  }
  for (std::size_t i = index; i < static_cast<std::size_t>(d); ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
  path.pop_back();
}

double unwound_sum(const Path& path, std::size_t index) {
  Path copy = path;
  unwind(copy, index);
  double total = 0.0;
  for (const PathElement& e : copy) total += e.pweight;
  return total;
}

struct TreeShapContext {
  const Tree* tree = nullptr;
  std::span<const double> row;
  std::span<double> phi;
};

void recurse(const TreeShapContext& ctx, int node_id, Path path, double zero_fraction,
             double one_fraction, int feature) {
  extend(path, zero_fraction, one_fraction, feature);
  const TreeNode& node = ctx.tree->nodes[static_cast<std::size_t>(node_id)];

  if (node.is_leaf()) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double w = unwound_sum(path, i);
      ctx.phi[static_cast<std::size_t>(path[i].feature)] +=
          w * (path[i].one_fraction - path[i].zero_fraction) * node.value;
    }
    return;
  }

  const double v = ctx.row[static_cast<std::size_t>(node.feature)];
  const bool go_left = is_missing(v) ? node.default_left : v <= node.threshold;
  const int hot = go_left ? node.left : node.right;
  const int cold = go_left ? node.right : node.left;
  const double hot_cover = ctx.tree->nodes[static_cast<std::size_t>(hot)].cover;
  const double cold_cover = ctx.tree->nodes[static_cast<std::size_t>(cold)].cover;

  double incoming_zero = 1.0;
  double incoming_one = 1.0;
  // A feature met twice on one path is still a single player: undo its
  // earlier extension and fold the fractions together.
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i].feature == node.feature) {
      incoming_zero = path[i].zero_fraction;
      incoming_one = path[i].one_fraction;
      unwind(path, i);
      break;
    }
  }

  recurse(ctx, hot, path, incoming_zero * hot_cover / node.cover, incoming_one, node.feature);
  recurse(ctx, cold, path, incoming_zero * cold_cover / node.cover, 0.0, node.feature);
}

double tree_expected_value(const Tree& tree, int node_id) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
  if (node.is_leaf()) return node.value;
  const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
  const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
  return (l.cover * tree_expected_value(tree, node.left) +
          r.cover * tree_expected_value(tree, node.right)) /
         node.cover;
}

}  // namespace

double expected_value(const Ensemble& ensemble) {
  double out = ensemble.base_score;
  for (const Tree& tree : ensemble.trees) {
    check_covers(tree);
    out += tree_expected_value(tree, 0);
  }
  return out;
}

Explanation tree_shap(const Ensemble& ensemble, std::span<const double> row) {
  if (row.size() != ensemble.feature_names.size())
    throw DataError("tree_shap: row has " + std::to_string(row.size()) + " values for " +
                    std::to_string(ensemble.feature_names.size()) + " features");
  Explanation exp;
  exp.phi.assign(ensemble.feature_names.size(), 0.0);
  exp.base_value = expected_value(ensemble);
  for (const Tree& tree : ensemble.trees) {
    TreeShapContext ctx{&tree, row, exp.phi};
    recurse(ctx, 0, Path{}, 1.0, 1.0, -1);
  }
  exp.prediction = ensemble.predict_row(row);
  return exp;
}

std::vector<Explanation> tree_shap_all(const Ensemble& ensemble, const FeatureMatrix& matrix,
                                       int workers) {
  const std::vector<std::size_t> perm = align_columns(ensemble.feature_names, matrix);
  std::vector<Explanation> out(matrix.n_rows());
  parallel_for(matrix.n_rows(), workers, [&](std::size_t r) {
    std::vector<double> row(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) row[i] = matrix.columns[perm[i]][r];
    out[r] = tree_shap(ensemble, row);
  });
  return out;
}

}  // namespace afrrcast
