#include "afrrcast/eval/metrics.hpp"

#include <cmath>
#include <string>

#include "afrrcast/errors.hpp"

namespace afrrcast {

namespace {

void check_pair(std::span<const double> y, std::span<const double> pred, std::size_t min_len,
                const char* what) {
  if (y.size() != pred.size())
    throw DataError(std::string(what) + ": length mismatch (" + std::to_string(y.size()) +
                    " vs " + std::to_string(pred.size()) + ")");
  if (y.size() < min_len)
    throw DataError(std::string(what) + ": needs at least " + std::to_string(min_len) + " rows");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!std::isfinite(y[i]) || !std::isfinite(pred[i]))
      throw DataError(std::string(what) + ": non-finite value at row " + std::to_string(i));
}

}  // namespace

double r2(std::span<const double> y, std::span<const double> pred) {
  check_pair(y, pred, 2, "r2");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sse += (y[i] - pred[i]) * (y[i] - pred[i]);
    sst += (y[i] - mean) * (y[i] - mean);
  }
  if (sst == 0.0) throw DataError("r2: target has zero variance");
  return 1.0 - sse / sst;
}

double mean_quantile_loss(std::span<const double> y, std::span<const double> pred, double q) {
  check_pair(y, pred, 1, "mean_quantile_loss");
  if (!(q > 0.0 && q < 1.0)) throw UsageError("mean_quantile_loss: q must lie in (0,1)");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    total += y[i] >= pred[i] ? q * (y[i] - pred[i]) : (1.0 - q) * (pred[i] - y[i]);
  return total / static_cast<double>(y.size());
}

double coverage(std::span<const double> y, std::span<const double> pred) {
  check_pair(y, pred, 1, "coverage");
  std::size_t covered = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] <= pred[i]) ++covered;
  return static_cast<double>(covered) / static_cast<double>(y.size());
}

}  // namespace afrrcast
