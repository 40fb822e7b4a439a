#pragma once

#include <span>
#include <string>
#include <vector>

#include "afrrcast/dataset/manifest.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

enum class UpsampleMode { pad, linear };

/// Expands a coarse series to the 15-minute grid; output length is
/// coarse.size() * factor. pad repeats each coarse value; linear places
/// anchors at the first 15-min slot of each coarse interval, interpolates
/// between consecutive anchors and holds the trailing segment flat. Missing
/// anchors make their span missing (for linear, slots between two anchors
/// need both).
std::vector<double> upsample(std::span<const double> coarse, int factor, UpsampleMode mode);

/// First difference: out[t] = v[t] - v[t-1]; out[0] is missing, as is any
/// step with a missing operand.
std::vector<double> ramp(std::span<const double> series);

/// forecast - actual, so a positive error is an overestimation by the
/// forecast. Missing on either side propagates.
std::vector<double> forecast_error(std::span<const double> forecast,
                                   std::span<const double> actual);

/// Net import-export balance: sum(inflows) - sum(outflows); positive means
/// net flow into the area. Missing in any contributing series at t makes the
/// balance missing at t. With no series at all the balance is zero.
std::vector<double> flow_balance(const std::vector<std::span<const double>>& inflows,
                                 const std::vector<std::span<const double>>& outflows,
                                 std::size_t n_rows);

/// Element-wise sum of per-country series; Germany must not be among the
/// inputs. Missing entries stay missing in the sum (they are not zeros).
std::vector<double> aggregate_igcc(const std::vector<const ColumnMeta*>& metas,
                                   const std::vector<std::span<const double>>& series);

struct CalendarColumns {
  std::vector<double> hour;     // local hour 0..23
  std::vector<double> weekday;  // 0 = Monday .. 6 = Sunday
  std::vector<double> month;    // 1..12
};

CalendarColumns calendar_features(std::span<const UnixSeconds> index, const TimeZoneRule& zone);

/// Runs the whole feature-engineering pass: upsampling of coarse columns,
/// flow balances, IGCC aggregation (per-country inputs are dropped after),
/// forecast errors ("forecast error <label>"), ramps of every feature column
/// not excluded by the manifest ("<base> ramp"), and calendar columns.
TimeTable engineer_features(const TimeTable& table, const Manifest& manifest);

}  // namespace afrrcast
