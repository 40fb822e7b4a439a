#include "afrrcast/dataset/validate.hpp"

#include <sstream>

namespace afrrcast {

bool ValidationReport::ok() const {
  for (const auto& f : findings)
    if (f.severity == Severity::error) return false;
  return true;
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& f : findings) {
    const char* tag = f.severity == Severity::error     ? "error"
                      : f.severity == Severity::warning ? "warning"
                                                        : "info";
    out << tag << " [" << f.column << "] " << f.message << '\n';
  }
  if (findings.empty()) out << "schema ok\n";
  return out.str();
}

ValidationReport validate_schema(const TimeTable& table, const Manifest& manifest,
                                 double missing_warn) {
  ValidationReport report;

  for (const auto& expected : manifest.columns) {
    if (!table.has(expected.name)) {
      report.findings.push_back(
          {Severity::error, expected.name, "column declared in manifest is missing from table"});
      continue;
    }
    const ColumnMeta& got = table.meta(expected.name);
    if (got.unit != expected.unit)
      report.findings.push_back({Severity::error, expected.name,
                                 "unit mismatch: manifest '" + expected.unit + "', table '" +
                                     got.unit + "'"});
    if (got.kind != expected.kind)
      report.findings.push_back({Severity::error, expected.name,
                                 "kind mismatch: manifest '" + to_string(expected.kind) +
                                     "', table '" + to_string(got.kind) + "'"});
    if (got.area != expected.area)
      report.findings.push_back({Severity::error, expected.name,
                                 "area mismatch: manifest '" + to_string(expected.area) +
                                     "', table '" + to_string(got.area) + "'"});
  }

  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const auto& values = table.col(c);
    const auto& meta = table.meta(c);
    std::size_t missing = 0;
    bool negative_target = false;
    for (double v : values) {
      if (is_missing(v)) {
        ++missing;
      } else if (meta.kind == ColumnKind::target && v < 0.0) {
        negative_target = true;
      }
    }
    const double fraction =
        values.empty() ? 0.0 : static_cast<double>(missing) / static_cast<double>(values.size());
    report.missing_fraction.emplace_back(meta.name, fraction);
    if (fraction > missing_warn) {
      std::ostringstream msg;
      msg << "missing-value fraction " << fraction;
      report.findings.push_back({Severity::warning, meta.name, msg.str(), fraction});
    }
    if (negative_target)
      report.findings.push_back(
          {Severity::warning, meta.name,
           "target column has negative values; check the manifest sign_flip switches"});
  }

  return report;
}

}  // namespace afrrcast
