#pragma once

#include <span>
#include <vector>

#include "afrrcast/gbt/tree.hpp"

namespace afrrcast {

/// Additive decomposition of one prediction: base_value + sum(phi) equals
/// the model output (local accuracy), with one contribution per feature in
/// the ensemble's feature order. Values are in the model's output units.
struct Explanation {
  double base_value = 0.0;
  double prediction = 0.0;
  std::vector<double> phi;
};

/// Expected prediction under the training distribution encoded by the node
/// covers: base_score plus each tree's cover-weighted mean leaf value.
double expected_value(const Ensemble& ensemble);

/// Exact path-dependent TreeSHAP (polynomial-time subset-path recursion).
/// The conditional expectation semantics are the cover-weighted descent also
/// used by brute_shap; missing feature values follow the default directions,
/// identical to prediction, so local accuracy holds for rows with missing
/// entries. Row values in ensemble feature order.
Explanation tree_shap(const Ensemble& ensemble, std::span<const double> row);

/// Explains every matrix row (aligned by name); rows are independent and
/// processed in parallel across `workers`.
std::vector<Explanation> tree_shap_all(const Ensemble& ensemble, const FeatureMatrix& matrix,
                                       int workers = 1);

}  // namespace afrrcast
