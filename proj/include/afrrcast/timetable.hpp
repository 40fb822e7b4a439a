#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "afrrcast/timestamp.hpp"

namespace afrrcast {

/// Missing cells are quiet NaNs; every operation states how it treats them.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

enum class ColumnKind { day_ahead, actual, engineered, target, benchmark, calendar };
enum class Area { DE, IGCC_other };

std::string to_string(ColumnKind k);
std::string to_string(Area a);
ColumnKind column_kind_from_string(const std::string& s);
Area area_from_string(const std::string& s);

struct ColumnMeta {
  std::string name;
  std::string unit;
  ColumnKind kind = ColumnKind::actual;
  Area area = Area::DE;
  int native_resolution_minutes = 15;  // 15, 60 or 240
  /// Actual generation of types that participate in reserve provision
  /// (hydro, nuclear, gas, ...). Drives the extended-vs-full variant split.
  bool dispatchable = false;
  /// For engineered columns: the columns they were derived from. A variant
  /// includes an engineered column iff it includes all of its sources.
  std::vector<std::string> sources;
  /// Resampling rule for coarse native resolutions: "pad" or "linear".
  std::string upsample = "pad";
};

/// Immutable table of named numeric series over a strict 15-minute UTC index.
/// Safe to share across threads once constructed.
class TimeTable {
 public:
  TimeTable(std::vector<UnixSeconds> index, std::vector<ColumnMeta> meta,
            std::vector<std::vector<double>> columns);

  std::size_t n_rows() const { return index_.size(); }
  std::size_t n_cols() const { return order_.size(); }
  const std::vector<UnixSeconds>& index() const { return index_; }
  const std::vector<std::string>& names() const { return order_; }

  bool has(const std::string& name) const { return pos_.count(name) > 0; }
  const std::vector<double>& col(const std::string& name) const;
  const ColumnMeta& meta(const std::string& name) const;
  const std::vector<double>& col(std::size_t i) const { return columns_[i]; }
  const ColumnMeta& meta(std::size_t i) const { return meta_[i]; }

  /// New table with extra columns appended (same index).
  TimeTable with_columns(std::vector<ColumnMeta> meta,
                         std::vector<std::vector<double>> columns) const;
  /// New table without the named columns.
  TimeTable without_columns(const std::vector<std::string>& names) const;
  /// New table with one column's values replaced (metadata kept).
  TimeTable with_replaced(const std::string& name, std::vector<double> values) const;

  bool equals(const TimeTable& other) const;

 private:
  std::size_t position(const std::string& name) const;

  std::vector<UnixSeconds> index_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::size_t> pos_;
  std::vector<ColumnMeta> meta_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace afrrcast
