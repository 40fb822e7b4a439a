#pragma once

#include <span>
#include <string>
#include <vector>

namespace afrrcast {

/// One metric evaluation row. metric is "r2", "mean_quantile_loss(q)" or
/// "coverage"; export column order is fixed to
/// variant,target,loss,split,metric,value.
struct MetricReport {
  std::string variant;
  std::string target;
  std::string loss;
  std::string split;
  std::string metric;
  double value = 0.0;
};

/// Applies the requested metrics ("r2", "quantile_loss", "coverage") to a
/// benchmark series as if it were a prediction, enabling the comparison with
/// tendered demand. Rows where either side is missing are dropped; if
/// nothing remains the series are considered misaligned.
std::vector<MetricReport> evaluate_benchmark(std::span<const double> y,
                                             std::span<const double> benchmark,
                                             const std::vector<std::string>& metrics, double q,
                                             const std::string& target,
                                             const std::string& split);

/// Orders reports of one (split, metric) group for side-by-side model
/// comparison: r2 descending, losses ascending. Mixed splits or metrics in
/// one call are an error.
std::vector<MetricReport> compare_models(std::span<const MetricReport> reports);

std::string metric_reports_to_csv(std::span<const MetricReport> reports);
std::vector<MetricReport> metric_reports_from_csv(const std::string& text);

}  // namespace afrrcast
