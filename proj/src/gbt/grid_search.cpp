#include "afrrcast/gbt/grid_search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "afrrcast/errors.hpp"
#include "afrrcast/util/rng.hpp"

namespace afrrcast {

GridSearchResult cv_grid_search(const FeatureMatrix& features, std::span<const double> y,
                                const std::vector<TrainConfig>& grid, const LossSpec& loss,
                                int k, std::uint64_t seed) {
  if (k < 2) throw UsageError("cv_grid_search: k must be >= 2");
  if (grid.empty()) throw UsageError("cv_grid_search: empty grid");
  const std::size_t n = features.n_rows();
  if (n != y.size()) throw DataError("cv_grid_search: rows and target length differ");
  if (n < static_cast<std::size_t>(k)) throw DataError("cv_grid_search: fewer rows than folds");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::pair<std::size_t, std::size_t>> fold_bounds;
  for (int f = 0; f < k; ++f)
    fold_bounds.emplace_back(n * static_cast<std::size_t>(f) / static_cast<std::size_t>(k),
                             n * static_cast<std::size_t>(f + 1) / static_cast<std::size_t>(k));

  std::size_t smallest_fold = n;
  for (const auto& [lo, hi] : fold_bounds) smallest_fold = std::min(smallest_fold, hi - lo);
  for (const auto& cell : grid) {
    cell.validate();
    if (smallest_fold < static_cast<std::size_t>(cell.min_data_in_leaf))
      throw DataError("cv_grid_search: fold of " + std::to_string(smallest_fold) +
                      " rows is smaller than min_data_in_leaf " +
                      std::to_string(cell.min_data_in_leaf));
  }

  GridSearchResult result;
  result.cells.reserve(grid.size());
  double best_loss = std::numeric_limits<double>::infinity();

  for (std::size_t cell_idx = 0; cell_idx < grid.size(); ++cell_idx) {
    GridCellScore score;
    score.config = grid[cell_idx];
    double total = 0.0;
    for (int f = 0; f < k; ++f) {
      const auto [lo, hi] = fold_bounds[static_cast<std::size_t>(f)];
      std::vector<int> held_out(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                order.begin() + static_cast<std::ptrdiff_t>(hi));
      std::vector<int> train_rows;
      train_rows.reserve(n - held_out.size());
      train_rows.insert(train_rows.end(), order.begin(),
                        order.begin() + static_cast<std::ptrdiff_t>(lo));
      train_rows.insert(train_rows.end(), order.begin() + static_cast<std::ptrdiff_t>(hi),
                        order.end());
      std::sort(train_rows.begin(), train_rows.end());
      std::sort(held_out.begin(), held_out.end());

      FeatureMatrix train_x = features.subset(train_rows);
      FeatureMatrix valid_x = features.subset(held_out);
      std::vector<double> train_y, valid_y;
      train_y.reserve(train_rows.size());
      valid_y.reserve(held_out.size());
      for (int r : train_rows) train_y.push_back(y[static_cast<std::size_t>(r)]);
      for (int r : held_out) valid_y.push_back(y[static_cast<std::size_t>(r)]);

      auto [model, report] = fit(train_x, train_y, loss, score.config,
                                 ValidationSet{&valid_x, valid_y});
      double fold_loss;
      if (report.valid_loss.empty()) {
        // Zero boosting rounds: score the base prediction.
        std::vector<double> base_pred(valid_y.size(), model.base_score);
        fold_loss = mean_loss(loss, valid_y, base_pred);
      } else {
        fold_loss = *std::min_element(report.valid_loss.begin(), report.valid_loss.end());
      }
      score.fold_losses.push_back(fold_loss);
      score.fold_best_rounds.push_back(report.best_round);
      total += fold_loss;
    }
    score.mean_loss = total / static_cast<double>(k);
    if (score.mean_loss < best_loss) {
      best_loss = score.mean_loss;
      result.best_index = cell_idx;
    }
    result.cells.push_back(std::move(score));
  }
  return result;
}

std::vector<TrainConfig> default_grid(const TrainConfig& base) {
  std::vector<TrainConfig> grid;
  for (double lr : {0.05, 0.1}) {
    for (int leaves : {15, 31, 63}) {
      for (int min_data : {20, 100}) {
        TrainConfig c = base;
        c.learning_rate = lr;
        c.max_leaves = leaves;
        c.min_data_in_leaf = min_data;
        grid.push_back(c);
      }
    }
  }
  return grid;
}

}  // namespace afrrcast
