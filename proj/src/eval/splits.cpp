#include "afrrcast/eval/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "afrrcast/errors.hpp"
#include "afrrcast/util/rng.hpp"

namespace afrrcast {

SplitPlan make_splits(std::span<const UnixSeconds> index, std::uint64_t seed,
                      int continuous_days) {
  if (index.empty()) throw DataError("make_splits: empty index");
  if (continuous_days < 1) throw UsageError("make_splits: continuous span must be >= 1 day");

  SplitPlan plan;
  plan.seed = seed;
  plan.continuous_days = continuous_days;

  const UnixSeconds span = static_cast<UnixSeconds>(continuous_days) * 86400;
  const UnixSeconds cutoff = index.back() - span;
  std::vector<int> remaining;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] > cutoff)
      plan.continuous_test.push_back(static_cast<int>(i));
    else
      remaining.push_back(static_cast<int>(i));
  }
  if (remaining.empty())
    throw DataError("make_splits: continuous span of " + std::to_string(continuous_days) +
                    " days covers the whole index");

  Rng rng(seed);
  rng.shuffle(remaining);

  const std::size_t n = remaining.size();
  const std::size_t n_train = static_cast<std::size_t>(std::llround(0.64 * static_cast<double>(n)));
  const std::size_t n_valid = static_cast<std::size_t>(std::llround(0.16 * static_cast<double>(n)));
  plan.train.assign(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(n_train));
  plan.valid.assign(remaining.begin() + static_cast<std::ptrdiff_t>(n_train),
                    remaining.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  plan.test.assign(remaining.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid),
                   remaining.end());
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.valid.begin(), plan.valid.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

nlohmann::json SplitPlan::to_json() const {
  nlohmann::json j;
  j["format"] = "afrrcast.splits";
  j["version"] = 1;
  j["seed"] = seed;
  j["continuous_days"] = continuous_days;
  j["train"] = train;
  j["valid"] = valid;
  j["test"] = test;
  j["continuous_test"] = continuous_test;
  return j;
}

SplitPlan SplitPlan::from_json(const nlohmann::json& j) {
  if (j.value("format", std::string{}) != "afrrcast.splits")
    throw DataError("not a splits file");
  SplitPlan p;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.continuous_days = j.at("continuous_days").get<int>();
  p.train = j.at("train").get<std::vector<int>>();
  p.valid = j.at("valid").get<std::vector<int>>();
  p.test = j.at("test").get<std::vector<int>>();
  p.continuous_test = j.at("continuous_test").get<std::vector<int>>();
  return p;
}

void SplitPlan::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write splits: " + path.string());
  out << to_json().dump(1) << '\n';
}

SplitPlan SplitPlan::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open splits: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("splits " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace afrrcast
