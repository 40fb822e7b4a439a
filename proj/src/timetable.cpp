#include "afrrcast/timetable.hpp"

#include <algorithm>

#include "afrrcast/errors.hpp"

namespace afrrcast {

std::string to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::day_ahead: return "day_ahead";
    case ColumnKind::actual: return "actual";
    case ColumnKind::engineered: return "engineered";
    case ColumnKind::target: return "target";
    case ColumnKind::benchmark: return "benchmark";
    case ColumnKind::calendar: return "calendar";
  }
  return "?";
}

std::string to_string(Area a) {
  return a == Area::DE ? "DE" : "IGCC_other";
}

ColumnKind column_kind_from_string(const std::string& s) {
  if (s == "day_ahead") return ColumnKind::day_ahead;
  if (s == "actual") return ColumnKind::actual;
  if (s == "engineered") return ColumnKind::engineered;
  if (s == "target") return ColumnKind::target;
  if (s == "benchmark") return ColumnKind::benchmark;
  if (s == "calendar") return ColumnKind::calendar;
  throw DataError("unknown column kind '" + s + "'");
}

Area area_from_string(const std::string& s) {
  if (s == "DE") return Area::DE;
  if (s == "IGCC_other") return Area::IGCC_other;
  throw DataError("unknown area '" + s + "'");
}

TimeTable::TimeTable(std::vector<UnixSeconds> index, std::vector<ColumnMeta> meta,
                     std::vector<std::vector<double>> columns)
    : index_(std::move(index)), meta_(std::move(meta)), columns_(std::move(columns)) {
  if (meta_.size() != columns_.size())
    throw DataError("TimeTable: metadata/column count mismatch");
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (!on_quarter_hour_grid(index_[i]))
      throw DataError("TimeTable: timestamp off the 15-minute grid at row " +
                      std::to_string(i + 1) + " (" + format_utc(index_[i]) + ")");
    if (i > 0 && index_[i] - index_[i - 1] != kSlotSeconds)
      throw DataError("TimeTable: index not contiguous 15-minute steps at row " +
                      std::to_string(i + 1) + " (" + format_utc(index_[i]) + ")");
  }
  order_.reserve(meta_.size());
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    const ColumnMeta& m = meta_[i];
    if (m.name.empty()) throw DataError("TimeTable: unnamed column");
    if (!pos_.emplace(m.name, i).second)
      throw DataError("TimeTable: duplicate column '" + m.name + "'");
    order_.push_back(m.name);
    if (columns_[i].size() != index_.size())
      throw DataError("TimeTable: column '" + m.name + "' has " +
                      std::to_string(columns_[i].size()) + " entries for " +
                      std::to_string(index_.size()) + " rows");
    if (m.kind == ColumnKind::target) {
      if (m.unit != "GW")
        throw DataError("target column '" + m.name + "' must be in GW, got '" + m.unit + "'");
      if (m.area != Area::DE)
        throw DataError("target column '" + m.name + "' must have area DE");
    }
  }
}

std::size_t TimeTable::position(const std::string& name) const {
  auto it = pos_.find(name);
  if (it == pos_.end()) throw DataError("no such column '" + name + "'");
  return it->second;
}

const std::vector<double>& TimeTable::col(const std::string& name) const {
  return columns_[position(name)];
}

const ColumnMeta& TimeTable::meta(const std::string& name) const {
  return meta_[position(name)];
}

TimeTable TimeTable::with_columns(std::vector<ColumnMeta> meta,
                                  std::vector<std::vector<double>> columns) const {
  std::vector<ColumnMeta> all_meta = meta_;
  std::vector<std::vector<double>> all_cols = columns_;
  for (auto& m : meta) all_meta.push_back(std::move(m));
  for (auto& c : columns) all_cols.push_back(std::move(c));
  return TimeTable(index_, std::move(all_meta), std::move(all_cols));
}

TimeTable TimeTable::without_columns(const std::vector<std::string>& names) const {
  std::vector<ColumnMeta> keep_meta;
  std::vector<std::vector<double>> keep_cols;
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    if (std::find(names.begin(), names.end(), meta_[i].name) == names.end()) {
      keep_meta.push_back(meta_[i]);
      keep_cols.push_back(columns_[i]);
    }
  }
  return TimeTable(index_, std::move(keep_meta), std::move(keep_cols));
}

TimeTable TimeTable::with_replaced(const std::string& name, std::vector<double> values) const {
  const std::size_t i = position(name);
  std::vector<std::vector<double>> cols = columns_;
  cols[i] = std::move(values);
  return TimeTable(index_, meta_, std::move(cols));
}

bool TimeTable::equals(const TimeTable& other) const {
  if (index_ != other.index_ || order_ != other.order_) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& a = columns_[c];
    const auto& b = other.columns_[c];
    for (std::size_t r = 0; r < a.size(); ++r) {
      const bool ma = is_missing(a[r]), mb = is_missing(b[r]);
      if (ma != mb) return false;
      if (!ma && a[r] != b[r]) return false;
    }
  }
  return true;
}

}  // namespace afrrcast
