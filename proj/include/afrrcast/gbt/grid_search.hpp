#pragma once

#include <cstdint>
#include <vector>

#include "afrrcast/gbt/train.hpp"

namespace afrrcast {

struct GridCellScore {
  TrainConfig config;
  double mean_loss = 0.0;
  std::vector<double> fold_losses;
  std::vector<int> fold_best_rounds;
};

struct GridSearchResult {
  std::size_t best_index = 0;
  std::vector<GridCellScore> cells;

  const TrainConfig& best_config() const { return cells[best_index].config; }
};

/// k-fold cross-validated grid search: rows are shuffled by `seed` into k
/// balanced folds; each cell is scored by the mean validation loss across
/// folds, with early stopping per fold on the held-out fold. Ties go to the
/// earlier grid cell.
GridSearchResult cv_grid_search(const FeatureMatrix& features, std::span<const double> y,
                                const std::vector<TrainConfig>& grid, const LossSpec& loss,
                                int k, std::uint64_t seed);

/// The shipped default grid: learning_rate {0.05, 0.1} x max_leaves
/// {15, 31, 63} x min_data_in_leaf {20, 100}, everything else from `base`.
std::vector<TrainConfig> default_grid(const TrainConfig& base);

}  // namespace afrrcast
