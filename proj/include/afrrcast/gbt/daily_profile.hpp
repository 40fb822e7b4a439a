#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "afrrcast/timestamp.hpp"

namespace afrrcast {

enum class ProfileMode { mean, quantile };

/// Baseline predicting each of the 96 daily 15-minute slots by its
/// historical statistic (mean, or the empirical q-quantile under the same
/// interpolation rule as the boosted trees). Slots are taken in the given
/// civil time zone, consistent with the calendar features.
struct DailyProfileModel {
  std::vector<double> slots;  // 96 values
  ProfileMode mode = ProfileMode::mean;
  double q = 0.9;
  TimeZoneRule zone;

  int slot_of(UnixSeconds t) const;
  double predict_at(UnixSeconds t) const;
  std::vector<double> predict(std::span<const UnixSeconds> index) const;

  nlohmann::json to_json() const;
  static DailyProfileModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static DailyProfileModel load(const std::filesystem::path& path);
};

/// Builds the profile from training observations; missing targets are
/// skipped; a slot with no observation at all is an error naming the slot.
DailyProfileModel daily_profile(std::span<const double> y, std::span<const UnixSeconds> index,
                                ProfileMode mode, double q, const TimeZoneRule& zone);

}  // namespace afrrcast
