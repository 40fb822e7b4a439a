#pragma once

#include <span>

#include "afrrcast/shap/tree_shap.hpp"

namespace afrrcast {

/// Verification oracle: evaluates the conditional expectation E[f(x) | x_S]
/// for every feature subset S by tree descent (follow the row at features in
/// S, cover-weighted average of both branches otherwise) and applies the
/// exact Shapley summation over subsets. Exponential in the feature count,
/// so it refuses layouts wider than max_features.
Explanation brute_shap(const Ensemble& ensemble, std::span<const double> row,
                       int max_features = 12);

/// The subset value function itself, exposed for tests: the subset is a
/// bitmask over the ensemble's feature order.
double subset_expectation(const Ensemble& ensemble, std::span<const double> row,
                          unsigned subset_mask);

}  // namespace afrrcast
