#pragma once

#include <span>
#include <string>
#include <vector>

#include "afrrcast/timetable.hpp"

namespace afrrcast {

enum class VariantName { daily_profile, day_ahead, day_ahead_igcc, extended, full };
enum class TargetSide { afrr_pos, afrr_neg };

std::string to_string(VariantName v);
std::string to_string(TargetSide t);
VariantName variant_from_string(const std::string& s);
TargetSide target_from_string(const std::string& s);

/// A named feature-set filter plus the target being modelled.
struct ModelVariant {
  VariantName name = VariantName::day_ahead;
  TargetSide target = TargetSide::afrr_pos;
};

/// Column-major numeric matrix aligned to a timestamp index. Column order is
/// fixed and recorded; models and explanations index into it.
struct FeatureMatrix {
  std::vector<UnixSeconds> index;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t n_rows() const { return index.size(); }
  std::size_t n_cols() const { return names.size(); }

  /// Gathers one row into `out` (size n_cols).
  void row(std::size_t r, std::span<double> out) const;
  std::vector<double> row(std::size_t r) const;

  /// Row subset, preserving the given order.
  FeatureMatrix subset(std::span<const int> rows) const;
};

/// Applies the variant's inclusion rules, in table column order:
///   daily_profile   no feature columns at all;
///   day_ahead       German day-ahead + calendar columns, plus engineered
///                   columns derived only from those (ramps of day-ahead);
///   day_ahead_igcc  day_ahead plus aggregated IGCC day-ahead columns;
///   extended        day_ahead plus non-dispatchable German actuals and the
///                   engineered columns they unlock (forecast errors, flows);
///   full            every feature column.
/// An engineered column is included iff all of its source columns are.
/// A variant whose defining column class is entirely absent is an error.
FeatureMatrix select_variant(const TimeTable& table, const ModelVariant& variant);

}  // namespace afrrcast
