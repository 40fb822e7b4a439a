#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "afrrcast/timestamp.hpp"

namespace afrrcast {

/// Row-index partition: a trailing contiguous range for time-series
/// forecasting plus a randomized 64/16/20 split of the remainder. The four
/// sets cover every row exactly once.
struct SplitPlan {
  std::vector<int> train;
  std::vector<int> valid;
  std::vector<int> test;
  std::vector<int> continuous_test;
  std::uint64_t seed = 0;
  int continuous_days = 61;

  nlohmann::json to_json() const;
  static SplitPlan from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static SplitPlan load(const std::filesystem::path& path);
};

/// Reserves the trailing `continuous_days` calendar days (default 61, two
/// months) before the final timestamp as the continuous test set, shuffles
/// the remaining rows by seed and cuts them 64/16/20. Deterministic given
/// the seed.
SplitPlan make_splits(std::span<const UnixSeconds> index, std::uint64_t seed,
                      int continuous_days = 61);

}  // namespace afrrcast
