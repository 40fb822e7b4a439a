#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "afrrcast/features/variant.hpp"
#include "afrrcast/gbt/loss.hpp"

namespace afrrcast {

/// One node of a regression tree, stored flat. feature < 0 marks a leaf.
/// Rows go left when value <= threshold; missing values follow default_left.
/// cover is the number of training rows that reached the node.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  bool default_left = true;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf value, learning rate already applied
  double cover = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at index 0

  int leaf_index_for(std::span<const double> row) const;
  double value_for(std::span<const double> row) const;
};

/// Boosted ensemble: prediction = base_score + sum of tree leaf values
/// (shrinkage is folded into the stored leaf values at training time).
struct Ensemble {
  double base_score = 0.0;
  LossSpec loss;
  double learning_rate = 1.0;
  std::vector<std::string> feature_names;
  std::vector<Tree> trees;

  /// Row values given in feature_names order.
  double predict_row(std::span<const double> row) const;

  /// Aligns the matrix columns to feature_names and predicts each row;
  /// errors if the layouts disagree.
  std::vector<double> predict(const FeatureMatrix& matrix) const;

  nlohmann::json to_json() const;
  static Ensemble from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Ensemble load(const std::filesystem::path& path);
};

/// Column permutation mapping feature_names order to matrix order; errors
/// when the name sets differ ("unknown feature layout").
std::vector<std::size_t> align_columns(const std::vector<std::string>& feature_names,
                                       const FeatureMatrix& matrix);

}  // namespace afrrcast
