#pragma once

#include <string>
#include <vector>

#include "afrrcast/dataset/manifest.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

enum class Severity { info, warning, error };

struct Finding {
  Severity severity = Severity::info;
  std::string column;
  std::string message;
  double fraction = 0.0;  // missing-value findings carry the fraction
};

struct ValidationReport {
  std::vector<Finding> findings;
  /// Missing-value fraction for every table column, in table order.
  std::vector<std::pair<std::string, double>> missing_fraction;

  bool ok() const;
  std::string to_text() const;
};

/// Checks the table against the manifest: missing columns, unit/kind/area
/// mismatches, missing-value fractions (warning above `missing_warn`),
/// negative values in target columns. Findings are report entries, never
/// exceptions.
ValidationReport validate_schema(const TimeTable& table, const Manifest& manifest,
                                 double missing_warn = 0.05);

}  // namespace afrrcast
