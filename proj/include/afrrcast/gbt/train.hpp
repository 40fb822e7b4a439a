#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "afrrcast/gbt/binning.hpp"
#include "afrrcast/gbt/tree.hpp"

namespace afrrcast {

struct TrainConfig {
  int num_rounds = 200;
  int max_leaves = 31;
  int min_data_in_leaf = 20;
  double learning_rate = 0.1;
  double lambda = 1.0;  // L2 regularization on leaf values
  int max_bins = 255;
  int early_stopping_rounds = 25;  // 0 disables early stopping
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct FitReport {
  std::vector<double> train_loss;  // one entry per boosting round
  std::vector<double> valid_loss;  // empty without a validation set
  int best_round = 0;              // trees kept in the returned ensemble
  std::string stop_reason;         // "max_rounds", "early_stopping" or "stalled"

  nlohmann::json to_json() const;
};

/// Tree plus the training-row partition per leaf, needed for quantile leaf
/// renewal and for updating train predictions without re-traversal.
struct GrownTree {
  Tree tree;
  std::vector<int> leaf_node_ids;
  std::vector<std::vector<int>> leaf_rows;  // aligned with leaf_node_ids
};

/// Leaf-wise best-first growth on pre-binned data. Split gain is
/// G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda); splits with
/// non-positive gain or children below min_data_in_leaf are rejected.
/// Missing rows follow the gain-maximizing direction; if a split sees no
/// missing rows the default goes to the larger-cover child (ties left).
/// Leaf values are -G/(H+lambda) scaled by the learning rate.
GrownTree grow_tree(const BinnedMatrix& binned, const Binning& binning,
                    std::span<const double> grad, std::span<const double> hess,
                    std::span<const int> rows, const TrainConfig& config);

/// Replaces every leaf value of a quantile-loss tree by the empirical
/// q-quantile (linear interpolation between order statistics) of the
/// training residuals y - pred in that leaf, scaled by the learning rate.
/// The surrogate gradient alone gives biased leaf values.
void renew_leaf_quantile(GrownTree& grown, std::span<const double> residuals, double q,
                         double learning_rate);

struct ValidationSet {
  const FeatureMatrix* features = nullptr;
  std::span<const double> y;
};

/// Boosting driver. base_score per the loss; up to num_rounds trees; early
/// stopping (validation required when enabled) truncates the ensemble to the
/// best round. Deterministic for a fixed config; worker count only splits
/// per-feature histogram work and does not change results.
std::pair<Ensemble, FitReport> fit(const FeatureMatrix& features, std::span<const double> y,
                                   const LossSpec& loss, const TrainConfig& config,
                                   std::optional<ValidationSet> validation = std::nullopt);

/// Retrains on the union of two disjoint row-index sets of one matrix with a
/// fixed round count and no early stopping (the validation rows are consumed
/// into training, so there is nothing left to stop on).
Ensemble fit_final(const FeatureMatrix& features, std::span<const double> y,
                   std::span<const int> train_rows, std::span<const int> valid_rows,
                   const LossSpec& loss, const TrainConfig& config, int rounds);

}  // namespace afrrcast
