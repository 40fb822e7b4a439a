#pragma once

#include <span>
#include <string>

namespace afrrcast {

/// Training objective: L2 for ex-post trajectory models, pinball for
/// day-ahead quantile models (q = 0.9 penalizes underestimation nine times
/// more than overestimation).
struct LossSpec {
  enum class Kind { l2, quantile };
  Kind kind = Kind::l2;
  double q = 0.9;  // meaningful only for quantile

  static LossSpec l2() { return {Kind::l2, 0.0}; }
  static LossSpec quantile(double q);

  bool is_quantile() const { return kind == Kind::quantile; }
  /// "l2" or "q90"-style tag used in run names and reports.
  std::string tag() const;
  std::string name() const;
  static LossSpec from_name(const std::string& text);
};

struct GradHess {
  double g = 0.0;
  double h = 1.0;
};

/// L2: g = pred - y, h = 1. Quantile(q): g = -q if y > pred else (1-q),
/// with a constant unit hessian surrogate.
GradHess grad_hess(const LossSpec& loss, double y, double pred);

/// Per-row loss: squared error, or the pinball loss
/// q*(y-pred) if y >= pred else (1-q)*(pred-y).
double row_loss(const LossSpec& loss, double y, double pred);

double mean_loss(const LossSpec& loss, std::span<const double> y, std::span<const double> pred);

/// mean(y) for L2; the empirical q-quantile (linear interpolation between
/// order statistics) for quantile loss.
double base_score(const LossSpec& loss, std::span<const double> y);

}  // namespace afrrcast
