#pragma once

// Test-only oracle: exhaustive axis-aligned split search on raw values,
// written independently of the histogram learner. Candidate thresholds are
// the midpoints between consecutive distinct values of the full column (the
// complete set of distinguishable axis splits); each candidate is evaluated
// per leaf by direct partitioning and exact gradient sums. Tie rules mirror
// the learner's contract: strictly greater gain wins, candidates are visited
// feature-ascending then threshold-ascending with missing-left before
// missing-right, and splits that see no missing rows default toward the
// larger child (ties left).

#include <cmath>
#include <vector>

#include "afrrcast/gbt/train.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast::testing {

struct OracleSplit {
  bool found = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = true;
  double left_value = 0.0;
  double right_value = 0.0;
  std::vector<int> left_rows;
  std::vector<int> right_rows;
};

struct OracleLeaf {
  std::vector<int> rows;
  double value = 0.0;
};

struct OracleNode {
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = true;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct OracleTree {
  std::vector<OracleNode> nodes;
  std::vector<OracleLeaf> leaves;

  double value_for(const std::vector<double>& row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const OracleNode& n = nodes[static_cast<std::size_t>(i)];
      const double v = row[static_cast<std::size_t>(n.feature)];
      const bool left = is_missing(v) ? n.missing_left : v <= n.threshold;
      i = left ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }
};

inline std::vector<double> oracle_thresholds(const std::vector<double>& column) {
  std::vector<double> distinct;
  for (double v : column)
    if (!is_missing(v)) distinct.push_back(v);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
    cuts.push_back(distinct[i] + 0.5 * (distinct[i + 1] - distinct[i]));
  return cuts;
}

inline double oracle_objective(double g, double h, double lambda) {
  return g * g / (h + lambda);
}

inline OracleSplit oracle_best_split_rows(const std::vector<std::vector<double>>& x,
                                          const std::vector<double>& grad,
                                          const std::vector<int>& rows,
                                          const TrainConfig& config) {
  OracleSplit best;
  double g_total = 0.0;
  for (int r : rows) g_total += grad[static_cast<std::size_t>(r)];
  const double h_total = static_cast<double>(rows.size());
  const double parent = oracle_objective(g_total, h_total, config.lambda);

  for (std::size_t f = 0; f < x.size(); ++f) {
    for (const double threshold : oracle_thresholds(x[f])) {
      std::vector<int> left_finite, right_finite, missing_rows;
      double g_left = 0.0, g_right = 0.0, g_miss = 0.0;
      for (int r : rows) {
        const double v = x[f][static_cast<std::size_t>(r)];
        if (is_missing(v)) {
          missing_rows.push_back(r);
          g_miss += grad[static_cast<std::size_t>(r)];
        } else if (v <= threshold) {
          left_finite.push_back(r);
          g_left += grad[static_cast<std::size_t>(r)];
        } else {
          right_finite.push_back(r);
          g_right += grad[static_cast<std::size_t>(r)];
        }
      }
      if (left_finite.empty() && right_finite.empty()) continue;

      auto consider = [&](bool missing_left) {
        const double gl = g_left + (missing_left ? g_miss : 0.0);
        const double gr = g_right + (missing_left ? 0.0 : g_miss);
        const std::size_t cl = left_finite.size() + (missing_left ? missing_rows.size() : 0);
        const std::size_t cr = right_finite.size() + (missing_left ? 0 : missing_rows.size());
        if (cl < static_cast<std::size_t>(config.min_data_in_leaf) ||
            cr < static_cast<std::size_t>(config.min_data_in_leaf))
          return;
        const double hl = static_cast<double>(cl);
        const double hr = static_cast<double>(cr);
        const double gain = oracle_objective(gl, hl, config.lambda) +
                            oracle_objective(gr, hr, config.lambda) - parent;
        if (gain <= 0.0 || gain <= best.gain) return;
        best.found = true;
        best.gain = gain;
        best.feature = static_cast<int>(f);
        best.threshold = threshold;
        best.missing_left = missing_left;
        best.left_value = gl == 0.0 ? 0.0 : -gl / (hl + config.lambda);
        best.right_value = gr == 0.0 ? 0.0 : -gr / (hr + config.lambda);
        best.left_rows = left_finite;
        best.right_rows = right_finite;
        auto& missing_side = missing_left ? best.left_rows : best.right_rows;
        missing_side.insert(missing_side.end(), missing_rows.begin(), missing_rows.end());
      };

      if (!missing_rows.empty()) {
        consider(true);
        consider(false);
      } else {
        consider(left_finite.size() >= right_finite.size());
      }
    }
  }
  best.left_value *= config.learning_rate;
  best.right_value *= config.learning_rate;
  return best;
}

inline OracleSplit oracle_best_split(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& grad,
                                     const TrainConfig& config) {
  std::vector<int> rows(grad.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  return oracle_best_split_rows(x, grad, rows, config);
}

inline OracleTree oracle_grow(const std::vector<std::vector<double>>& x,
                              const std::vector<double>& grad, const TrainConfig& config) {
  OracleTree tree;
  struct Open {
    int node_id;
    std::vector<int> rows;
    OracleSplit best;
    bool open = true;
  };
  std::vector<Open> pending;

  auto leaf_value = [&](const std::vector<int>& rows) {
    double g = 0.0;
    for (int r : rows) g += grad[static_cast<std::size_t>(r)];
    const double raw =
        g == 0.0 ? 0.0 : -g / (static_cast<double>(rows.size()) + config.lambda);
    return raw * config.learning_rate;
  };

  auto open_leaf = [&](std::vector<int> rows) {
    Open o;
    o.node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    o.best = oracle_best_split_rows(x, grad, rows, config);
    o.rows = std::move(rows);
    pending.push_back(std::move(o));
  };

  std::vector<int> all(grad.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  open_leaf(std::move(all));

  int n_leaves = 1;
  while (n_leaves < config.max_leaves) {
    int pick = -1;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!pending[i].open || !pending[i].best.found) continue;
      if (pick < 0 || pending[i].best.gain > pending[static_cast<std::size_t>(pick)].best.gain)
        pick = static_cast<int>(i);
    }
    if (pick < 0) break;
    Open& parent = pending[static_cast<std::size_t>(pick)];
    parent.open = false;
    const int parent_id = parent.node_id;
    OracleNode& node = tree.nodes[static_cast<std::size_t>(parent_id)];
    node.feature = parent.best.feature;
    node.threshold = parent.best.threshold;
    node.missing_left = parent.best.missing_left;
    std::vector<int> left_rows = parent.best.left_rows;
    std::vector<int> right_rows = parent.best.right_rows;
    open_leaf(std::move(left_rows));
    tree.nodes[static_cast<std::size_t>(parent_id)].left = pending.back().node_id;
    open_leaf(std::move(right_rows));
    tree.nodes[static_cast<std::size_t>(parent_id)].right = pending.back().node_id;
    ++n_leaves;
  }

  for (Open& o : pending) {
    if (!o.open) continue;
    tree.nodes[static_cast<std::size_t>(o.node_id)].value = leaf_value(o.rows);
    tree.leaves.push_back({std::move(o.rows), tree.nodes[static_cast<std::size_t>(o.node_id)].value});
  }
  return tree;
}

}  // namespace afrrcast::testing
