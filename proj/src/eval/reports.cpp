#include "afrrcast/eval/reports.hpp"

#include <algorithm>
#include <sstream>

#include "afrrcast/dataset/table_io.hpp"
#include "afrrcast/errors.hpp"
#include "afrrcast/eval/metrics.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

std::vector<MetricReport> evaluate_benchmark(std::span<const double> y,
                                             std::span<const double> benchmark,
                                             const std::vector<std::string>& metrics, double q,
                                             const std::string& target,
                                             const std::string& split) {
  if (y.size() != benchmark.size())
    throw DataError("evaluate_benchmark: series misaligned (" + std::to_string(y.size()) +
                    " vs " + std::to_string(benchmark.size()) + " rows)");
  std::vector<double> ys, bs;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (is_missing(y[i]) || is_missing(benchmark[i])) continue;
    ys.push_back(y[i]);
    bs.push_back(benchmark[i]);
  }
  if (ys.empty())
    throw DataError("evaluate_benchmark: no aligned non-missing rows");

  std::vector<MetricReport> out;
  for (const std::string& metric : metrics) {
    MetricReport row;
    row.variant = "benchmark";
    row.target = target;
    row.loss = "none";
    row.split = split;
    if (metric == "r2") {
      row.metric = "r2";
      row.value = r2(ys, bs);
    } else if (metric == "quantile_loss") {
      row.metric = "mean_quantile_loss(" + format_double(q) + ")";
      row.value = mean_quantile_loss(ys, bs, q);
    } else if (metric == "coverage") {
      row.metric = "coverage";
      row.value = coverage(ys, bs);
    } else {
      throw UsageError("evaluate_benchmark: unknown metric '" + metric + "'");
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<MetricReport> compare_models(std::span<const MetricReport> reports) {
  if (reports.empty()) return {};
  const std::string& split = reports.front().split;
  const std::string& metric = reports.front().metric;
  for (const MetricReport& r : reports) {
    if (r.split != split)
      throw DataError("compare_models: mixed splits ('" + split + "' vs '" + r.split + "')");
    if (r.metric != metric)
      throw DataError("compare_models: mixed metrics ('" + metric + "' vs '" + r.metric + "')");
  }
  std::vector<MetricReport> out(reports.begin(), reports.end());
  const bool descending = metric == "r2";  // higher is better only for r2
  std::stable_sort(out.begin(), out.end(), [&](const MetricReport& a, const MetricReport& b) {
    return descending ? a.value > b.value : a.value < b.value;
  });
  return out;
}

std::string metric_reports_to_csv(std::span<const MetricReport> reports) {
  std::ostringstream out;
  out << "variant,target,loss,split,metric,value\n";
  for (const MetricReport& r : reports)
    out << r.variant << ',' << r.target << ',' << r.loss << ',' << r.split << ',' << r.metric
        << ',' << format_double(r.value) << '\n';
  return out.str();
}

std::vector<MetricReport> metric_reports_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("metric csv: empty");
  std::vector<MetricReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MetricReport r;
    std::istringstream row(line);
    std::string value;
    if (!std::getline(row, r.variant, ',') || !std::getline(row, r.target, ',') ||
        !std::getline(row, r.loss, ',') || !std::getline(row, r.split, ',') ||
        !std::getline(row, r.metric, ',') || !std::getline(row, value))
      throw DataError("metric csv: malformed row '" + line + "'");
    r.value = std::stod(value);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace afrrcast
