#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afrrcast/timestamp.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

/// Day-ahead forecast paired with its realized series. The engineered column
/// is named "forecast error <label>" (or exactly `label` if label already
/// names a full column, e.g. "unscheduled flow").
struct ForecastErrorSpec {
  std::string label;
  std::string forecast;
  std::string actual;
  bool literal_name = false;
};

/// Per-country day-ahead columns summed into one series, Germany excluded.
struct IgccAggregateSpec {
  std::string name;
  std::vector<std::string> members;
};

/// Directed cross-border flows reduced to a net import-export balance.
struct FlowBalanceSpec {
  std::string name;
  std::vector<std::string> inflows;
  std::vector<std::string> outflows;
  ColumnKind kind = ColumnKind::actual;
  std::string unit = "GW";
};

/// Schema manifest: the authoritative column list plus the engineering and
/// target configuration. This is configuration, not code; the column
/// catalogue of the published dataset lives here.
struct Manifest {
  std::vector<ColumnMeta> columns;  // declared order fixes table column order

  std::string target_positive;
  std::string target_negative;
  bool sign_flip_positive = false;  // ingest multiplies by -1 (signed source data)
  bool sign_flip_negative = false;

  std::string benchmark_positive;
  std::string benchmark_negative;

  std::vector<std::string> ramp_exclude;
  std::vector<ForecastErrorSpec> forecast_errors;
  std::vector<IgccAggregateSpec> igcc_aggregates;
  std::vector<FlowBalanceSpec> flow_balances;

  TimeZoneRule zone;

  const ColumnMeta* find(const std::string& name) const;
  std::string target_column(bool positive) const;
  std::string benchmark_column(bool positive) const;

  static Manifest from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static Manifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// The two modelled targets, both nonnegative magnitudes (negative reserve
/// is its own column; the two sides are regressed separately).
struct TargetPair {
  std::vector<double> afrr_pos;
  std::vector<double> afrr_neg;
};

/// Extracts both target series; errors if either is undeclared or absent.
TargetPair target_pair(const TimeTable& table, const Manifest& manifest);

}  // namespace afrrcast
