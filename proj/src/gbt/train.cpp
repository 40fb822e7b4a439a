#include "afrrcast/gbt/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "afrrcast/errors.hpp"
#include "afrrcast/util/parallel.hpp"
#include "afrrcast/util/quantile.hpp"

namespace afrrcast {

void TrainConfig::validate() const {
  if (num_rounds < 0) throw UsageError("num_rounds must be >= 0");
  if (max_leaves < 1) throw UsageError("max_leaves must be >= 1");
  if (min_data_in_leaf < 1) throw UsageError("min_data_in_leaf must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0))
    throw UsageError("learning_rate must lie in (0,1]");
  if (lambda < 0.0) throw UsageError("lambda must be >= 0");
  if (max_bins < 2) throw UsageError("max_bins must be >= 2");
  if (early_stopping_rounds < 0) throw UsageError("early_stopping_rounds must be >= 0");
  if (workers < 1) throw UsageError("workers must be >= 1");
}

nlohmann::json TrainConfig::to_json() const {
  nlohmann::json j;
  j["num_rounds"] = num_rounds;
  j["max_leaves"] = max_leaves;
  j["min_data_in_leaf"] = min_data_in_leaf;
  j["learning_rate"] = learning_rate;
  j["lambda"] = lambda;
  j["max_bins"] = max_bins;
  j["early_stopping_rounds"] = early_stopping_rounds;
  j["seed"] = seed;
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.num_rounds = j.value("num_rounds", c.num_rounds);
  c.max_leaves = j.value("max_leaves", c.max_leaves);
  c.min_data_in_leaf = j.value("min_data_in_leaf", c.min_data_in_leaf);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.lambda = j.value("lambda", c.lambda);
  c.max_bins = j.value("max_bins", c.max_bins);
  c.early_stopping_rounds = j.value("early_stopping_rounds", c.early_stopping_rounds);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

nlohmann::json FitReport::to_json() const {
  nlohmann::json j;
  j["train_loss"] = train_loss;
  j["valid_loss"] = valid_loss;
  j["best_round"] = best_round;
  j["stop_reason"] = stop_reason;
  return j;
}

namespace {

struct BinStats {
  double g = 0.0;
  double h = 0.0;
  int count = 0;
};

struct SplitDecision {
  bool found = false;
  double gain = 0.0;
  int feature = -1;
  int boundary = -1;  // split after this bin; threshold = cuts[boundary]
  bool missing_left = true;
};

struct LeafState {
  int node_id = -1;
  std::vector<int> rows;
  double g_sum = 0.0;
  double h_sum = 0.0;
  SplitDecision best;
  bool open = true;
};

double leaf_objective(double g, double h, double lambda) {
  return g * g / (h + lambda);
}

/// Best split of one leaf over one feature; histogram scan left to right.
SplitDecision best_split_for_feature(const std::vector<BinStats>& hist, int n_finite_bins,
                                     double g_total, double h_total, int count_total,
                                     const TrainConfig& config, int feature) {
  SplitDecision best;
  const BinStats& miss = hist[static_cast<std::size_t>(n_finite_bins)];
  const double parent_obj = leaf_objective(g_total, h_total, config.lambda);

  double g_left = 0.0, h_left = 0.0;
  int count_left = 0;
  for (int b = 0; b + 1 < n_finite_bins; ++b) {
    g_left += hist[static_cast<std::size_t>(b)].g;
    h_left += hist[static_cast<std::size_t>(b)].h;
    count_left += hist[static_cast<std::size_t>(b)].count;
    const double g_right = g_total - miss.g - g_left;
    const double h_right = h_total - miss.h - h_left;
    const int count_right = count_total - miss.count - count_left;
    if (count_left + count_right == 0) continue;

    auto consider = [&](bool missing_left) {
      const double gl = g_left + (missing_left ? miss.g : 0.0);
      const double hl = h_left + (missing_left ? miss.h : 0.0);
      const int cl = count_left + (missing_left ? miss.count : 0);
      const double gr = g_right + (missing_left ? 0.0 : miss.g);
      const double hr = h_right + (missing_left ? 0.0 : miss.h);
      const int cr = count_right + (missing_left ? 0 : miss.count);
      if (cl < config.min_data_in_leaf || cr < config.min_data_in_leaf) return;
      const double gain =
          leaf_objective(gl, hl, config.lambda) + leaf_objective(gr, hr, config.lambda) - parent_obj;
      if (gain > best.gain && gain > 0.0) {
        best = {true, gain, feature, b, missing_left};
      }
    };

    if (miss.count > 0) {
      consider(true);
      consider(false);
    } else {
      // No missing rows here, so the direction is not gain-driven; send
      // unseen missing values toward the larger-cover child (ties left).
      consider(count_left >= count_right);
    }
  }
  return best;
}

SplitDecision best_split_for_leaf(const LeafState& leaf, const BinnedMatrix& binned,
                                  const Binning& binning, std::span<const double> grad,
                                  std::span<const double> hess, const TrainConfig& config) {
  const std::size_t n_features = binned.feature_bins.size();
  std::vector<SplitDecision> per_feature(n_features);

  parallel_for(n_features, config.workers, [&](std::size_t f) {
    const ColumnBins& bins = binning.per_feature[f];
    if (bins.all_missing) return;
    const int n_finite = bins.n_bins();
    std::vector<BinStats> hist(static_cast<std::size_t>(n_finite) + 1);
    const auto& ids = binned.feature_bins[f];
    for (int r : leaf.rows) {
      BinStats& s = hist[ids[static_cast<std::size_t>(r)]];
      s.g += grad[static_cast<std::size_t>(r)];
      s.h += hess[static_cast<std::size_t>(r)];
      s.count += 1;
    }
    per_feature[f] = best_split_for_feature(hist, n_finite, leaf.g_sum, leaf.h_sum,
                                            static_cast<int>(leaf.rows.size()), config,
                                            static_cast<int>(f));
  });

  SplitDecision best;
  for (const SplitDecision& cand : per_feature) {
    if (!cand.found) continue;
    // Strictly-greater keeps the first feature / lowest threshold on ties,
    // which the exhaustive oracle mirrors.
    if (!best.found || cand.gain > best.gain) best = cand;
  }
  return best;
}

}  // namespace

GrownTree grow_tree(const BinnedMatrix& binned, const Binning& binning,
                    std::span<const double> grad, std::span<const double> hess,
                    std::span<const int> rows, const TrainConfig& config) {
  config.validate();
  if (static_cast<int>(rows.size()) < config.min_data_in_leaf)
    throw DataError("grow_tree: fewer rows than min_data_in_leaf");

  GrownTree out;
  std::vector<TreeNode>& nodes = out.tree.nodes;

  std::vector<LeafState> leaves;
  auto make_leaf = [&](std::vector<int> leaf_rows) {
    LeafState leaf;
    leaf.rows = std::move(leaf_rows);
    for (int r : leaf.rows) {
      leaf.g_sum += grad[static_cast<std::size_t>(r)];
      leaf.h_sum += hess[static_cast<std::size_t>(r)];
    }
    TreeNode node;
    node.cover = static_cast<double>(leaf.rows.size());
    leaf.node_id = static_cast<int>(nodes.size());
    nodes.push_back(node);
    leaf.best = best_split_for_leaf(leaf, binned, binning, grad, hess, config);
    leaves.push_back(std::move(leaf));
  };

  make_leaf(std::vector<int>(rows.begin(), rows.end()));

  int n_leaves = 1;
  while (n_leaves < config.max_leaves) {
    int pick = -1;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (!leaves[i].open || !leaves[i].best.found) continue;
      if (pick < 0 || leaves[i].best.gain > leaves[static_cast<std::size_t>(pick)].best.gain)
        pick = static_cast<int>(i);
    }
    if (pick < 0) break;

    LeafState& leaf = leaves[static_cast<std::size_t>(pick)];
    const SplitDecision& split = leaf.best;
    const ColumnBins& bins = binning.per_feature[static_cast<std::size_t>(split.feature)];
    const auto& ids = binned.feature_bins[static_cast<std::size_t>(split.feature)];
    const int missing_bin = bins.missing_bin();

    std::vector<int> left_rows, right_rows;
    left_rows.reserve(leaf.rows.size());
    right_rows.reserve(leaf.rows.size());
    for (int r : leaf.rows) {
      const int b = ids[static_cast<std::size_t>(r)];
      const bool go_left = (b == missing_bin) ? split.missing_left : b <= split.boundary;
      (go_left ? left_rows : right_rows).push_back(r);
    }

    TreeNode& parent = nodes[static_cast<std::size_t>(leaf.node_id)];
    parent.feature = split.feature;
    parent.threshold = bins.cuts[static_cast<std::size_t>(split.boundary)];
    parent.default_left = split.missing_left;
    leaf.open = false;
    leaf.rows.clear();
    leaf.rows.shrink_to_fit();

    // Children; note make_leaf may reallocate `leaves`, so finish with the
    // parent reference first.
    const int parent_id = leaf.node_id;
    make_leaf(std::move(left_rows));
    nodes[static_cast<std::size_t>(parent_id)].left = leaves.back().node_id;
    make_leaf(std::move(right_rows));
    nodes[static_cast<std::size_t>(parent_id)].right = leaves.back().node_id;
    ++n_leaves;
  }

  for (LeafState& leaf : leaves) {
    if (!leaf.open) continue;
    TreeNode& node = nodes[static_cast<std::size_t>(leaf.node_id)];
    const double raw = leaf.g_sum == 0.0 ? 0.0 : -leaf.g_sum / (leaf.h_sum + config.lambda);
    node.value = raw * config.learning_rate;
    out.leaf_node_ids.push_back(leaf.node_id);
    out.leaf_rows.push_back(std::move(leaf.rows));
  }
  return out;
}

void renew_leaf_quantile(GrownTree& grown, std::span<const double> residuals, double q,
                         double learning_rate) {
  for (std::size_t i = 0; i < grown.leaf_node_ids.size(); ++i) {
    std::vector<double> r;
    r.reserve(grown.leaf_rows[i].size());
    for (int row : grown.leaf_rows[i]) r.push_back(residuals[static_cast<std::size_t>(row)]);
    if (r.empty()) throw Error("renew_leaf_quantile: empty leaf");
    const double value = quantile_linear(r, q);
    grown.tree.nodes[static_cast<std::size_t>(grown.leaf_node_ids[i])].value =
        value * learning_rate;
  }
}

std::pair<Ensemble, FitReport> fit(const FeatureMatrix& features, std::span<const double> y,
                                   const LossSpec& loss, const TrainConfig& config,
                                   std::optional<ValidationSet> validation) {
  config.validate();
  if (features.n_rows() == 0) throw DataError("fit: empty training set");
  if (features.n_rows() != y.size())
    throw DataError("fit: feature rows (" + std::to_string(features.n_rows()) +
                    ") and target length (" + std::to_string(y.size()) + ") differ");
  for (double v : y)
    if (!std::isfinite(v)) throw DataError("fit: target contains missing or non-finite values");
  const bool early_stopping = config.early_stopping_rounds > 0 && config.num_rounds > 0;
  if (early_stopping && !validation)
    throw DataError("fit: early stopping requested but no validation set given");
  if (validation && validation->features->n_rows() != validation->y.size())
    throw DataError("fit: validation rows and target length differ");

  Ensemble model;
  model.loss = loss;
  model.learning_rate = config.learning_rate;
  model.feature_names = features.names;
  model.base_score = base_score(loss, y);

  FitReport report;
  report.stop_reason = "max_rounds";

  auto [binned, binning] = bin_features(features, config.max_bins);

  const std::size_t n = features.n_rows();
  std::vector<int> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<double> pred(n, model.base_score);
  std::vector<double> grad(n), hess(n);

  std::vector<double> valid_pred;
  std::vector<std::vector<double>> valid_rows_buf;
  if (validation) {
    valid_pred.assign(validation->features->n_rows(), model.base_score);
    valid_rows_buf.reserve(validation->features->n_rows());
    const auto perm = align_columns(features.names, *validation->features);
    for (std::size_t r = 0; r < validation->features->n_rows(); ++r) {
      std::vector<double> row(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i)
        row[i] = validation->features->columns[perm[i]][r];
      valid_rows_buf.push_back(std::move(row));
    }
  }

  double best_valid = std::numeric_limits<double>::infinity();
  int best_round = 0;

  for (int round = 0; round < config.num_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const GradHess gh = grad_hess(loss, y[i], pred[i]);
      grad[i] = gh.g;
      hess[i] = gh.h;
    }

    GrownTree grown = grow_tree(binned, binning, grad, hess, all_rows, config);
    if (loss.is_quantile()) {
      std::vector<double> residuals(n);
      for (std::size_t i = 0; i < n; ++i) residuals[i] = y[i] - pred[i];
      renew_leaf_quantile(grown, residuals, loss.q, config.learning_rate);
    }

    bool all_zero = true;
    for (std::size_t li = 0; li < grown.leaf_node_ids.size(); ++li) {
      const double v =
          grown.tree.nodes[static_cast<std::size_t>(grown.leaf_node_ids[li])].value;
      if (v != 0.0) all_zero = false;
      for (int r : grown.leaf_rows[li]) pred[static_cast<std::size_t>(r)] += v;
    }

    model.trees.push_back(grown.tree);
    report.train_loss.push_back(mean_loss(loss, y, pred));

    if (validation) {
      for (std::size_t r = 0; r < valid_pred.size(); ++r)
        valid_pred[r] += grown.tree.value_for(valid_rows_buf[r]);
      const double vl = mean_loss(loss, validation->y, valid_pred);
      report.valid_loss.push_back(vl);
      if (vl < best_valid) {
        best_valid = vl;
        best_round = round + 1;
      }
      if (early_stopping && (round + 1) - best_round >= config.early_stopping_rounds) {
        report.stop_reason = "early_stopping";
        break;
      }
    } else {
      best_round = round + 1;
    }

    if (all_zero && grown.tree.nodes.size() == 1) {
      // A single zero leaf cannot change later rounds either.
      report.stop_reason = "stalled";
      break;
    }
  }

  if (validation && !report.valid_loss.empty()) {
    model.trees.resize(static_cast<std::size_t>(best_round));
  }
  report.best_round = static_cast<int>(model.trees.size());
  return {std::move(model), std::move(report)};
}

Ensemble fit_final(const FeatureMatrix& features, std::span<const double> y,
                   std::span<const int> train_rows, std::span<const int> valid_rows,
                   const LossSpec& loss, const TrainConfig& config, int rounds) {
  std::unordered_set<int> seen(train_rows.begin(), train_rows.end());
  for (int r : valid_rows)
    if (seen.count(r))
      throw DataError("fit_final: train and validation index sets overlap at row " +
                      std::to_string(r));

  std::vector<int> all;
  all.reserve(train_rows.size() + valid_rows.size());
  all.insert(all.end(), train_rows.begin(), train_rows.end());
  all.insert(all.end(), valid_rows.begin(), valid_rows.end());
  std::sort(all.begin(), all.end());

  FeatureMatrix sub = features.subset(all);
  std::vector<double> suby;
  suby.reserve(all.size());
  for (int r : all) suby.push_back(y[static_cast<std::size_t>(r)]);

  TrainConfig final_config = config;
  final_config.num_rounds = rounds;
  final_config.early_stopping_rounds = 0;  // nothing left to stop on
  auto [model, report] = fit(sub, suby, loss, final_config, std::nullopt);
  return model;
}

}  // namespace afrrcast
