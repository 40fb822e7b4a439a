#pragma once

#include <span>

namespace afrrcast {

/// Coefficient of determination 1 - SSE/SST (SST about the mean of y).
/// At most 1, can be negative; errors on zero target variance.
double r2(std::span<const double> y, std::span<const double> pred);

/// Mean pinball loss: q*(y-pred) if y >= pred else (1-q)*(pred-y), averaged.
/// The weighted average cost of under- vs over-procurement.
double mean_quantile_loss(std::span<const double> y, std::span<const double> pred, double q);

/// Fraction of rows with y <= pred (ties count as covered; activated
/// reserves contain exact zeros). A calibrated q-quantile model approaches q.
double coverage(std::span<const double> y, std::span<const double> pred);

}  // namespace afrrcast
