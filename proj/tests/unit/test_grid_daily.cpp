#include <doctest.h>

#include "afrrcast/errors.hpp"
#include "afrrcast/gbt/daily_profile.hpp"
#include "afrrcast/gbt/grid_search.hpp"
#include "afrrcast/timetable.hpp"
#include "afrrcast/util/rng.hpp"

using namespace afrrcast;

namespace {

FeatureMatrix noisy_matrix(Rng& rng, std::size_t n) {
  FeatureMatrix m;
  m.names = {"x"};
  m.index.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.index[i] = static_cast<UnixSeconds>(i) * 900;
  std::vector<double> col(n);
  for (double& v : col) v = rng.normal();
  m.columns.push_back(std::move(col));
  return m;
}

TrainConfig cv_config() {
  TrainConfig c;
  c.num_rounds = 30;
  c.max_leaves = 7;
  c.min_data_in_leaf = 10;
  c.learning_rate = 0.2;
  c.early_stopping_rounds = 5;
  return c;
}

}  // namespace

TEST_CASE("cv_grid_search: single-cell grid returns that config") {
  Rng rng(31);
  const FeatureMatrix m = noisy_matrix(rng, 300);
  std::vector<double> y(300);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = m.columns[0][i] + rng.normal(0, 0.2);
  const GridSearchResult result = cv_grid_search(m, y, {cv_config()}, LossSpec::l2(), 5, 99);
  CHECK(result.best_index == 0);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].fold_losses.size() == 5);
}

TEST_CASE("cv_grid_search: duplicated configs tie and the first wins") {
  Rng rng(32);
  const FeatureMatrix m = noisy_matrix(rng, 250);
  std::vector<double> y(250);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = m.columns[0][i];
  const GridSearchResult result =
      cv_grid_search(m, y, {cv_config(), cv_config()}, LossSpec::l2(), 4, 7);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[0].mean_loss == result.cells[1].mean_loss);
  CHECK(result.best_index == 0);
}

TEST_CASE("cv_grid_search: 5 folds of 1000 rows hold out 200 each") {
  Rng rng(33);
  const FeatureMatrix m = noisy_matrix(rng, 1000);
  std::vector<double> y(1000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = m.columns[0][i] + rng.normal(0, 0.1);
  TrainConfig c = cv_config();
  c.num_rounds = 10;
  const GridSearchResult result = cv_grid_search(m, y, {c}, LossSpec::l2(), 5, 1);
  // Each fold contributed one loss from a 200-row held-out set.
  CHECK(result.cells[0].fold_losses.size() == 5);
}

TEST_CASE("cv_grid_search errors: bad k, empty grid, fold too small") {
  Rng rng(34);
  const FeatureMatrix m = noisy_matrix(rng, 100);
  const std::vector<double> y(100, 1.0);
  CHECK_THROWS_AS(cv_grid_search(m, y, {cv_config()}, LossSpec::l2(), 1, 0), UsageError);
  CHECK_THROWS_AS(cv_grid_search(m, y, {}, LossSpec::l2(), 5, 0), UsageError);
  TrainConfig big = cv_config();
  big.min_data_in_leaf = 60;  // folds have only ~20 rows
  CHECK_THROWS_AS(cv_grid_search(m, y, {big}, LossSpec::l2(), 5, 0), DataError);
}

TEST_CASE("cv_grid_search picks the plainly better cell") {
  Rng rng(35);
  const FeatureMatrix m = noisy_matrix(rng, 600);
  std::vector<double> y(600);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 3.0 * m.columns[0][i] + rng.normal(0, 0.1);
  TrainConfig crippled = cv_config();
  crippled.num_rounds = 0;  // predicts the base score only
  TrainConfig decent = cv_config();
  const GridSearchResult result =
      cv_grid_search(m, y, {crippled, decent}, LossSpec::l2(), 4, 5);
  CHECK(result.best_index == 1);
}

TEST_CASE("default grid is the documented 12-cell cross product") {
  const std::vector<TrainConfig> grid = default_grid(TrainConfig{});
  CHECK(grid.size() == 12);
  CHECK(grid.front().learning_rate == 0.05);
  CHECK(grid.front().max_leaves == 15);
  CHECK(grid.front().min_data_in_leaf == 20);
  CHECK(grid.back().learning_rate == 0.1);
  CHECK(grid.back().max_leaves == 63);
  CHECK(grid.back().min_data_in_leaf == 100);
}

TEST_CASE("daily profile: constant series and mean of slot observations") {
  TimeZoneRule utc{0, false};
  const UnixSeconds t0 = parse_utc("2020-01-01T00:00:00Z");
  std::vector<UnixSeconds> index;
  std::vector<double> y;
  for (int day = 0; day < 2; ++day)
    for (int slot = 0; slot < 96; ++slot) {
      index.push_back(t0 + (day * 96 + slot) * 900);
      y.push_back(day == 0 ? 1.0 : 3.0);  // slot mean 2.0
    }
  const DailyProfileModel model = daily_profile(y, index, ProfileMode::mean, 0.9, utc);
  for (double slot : model.slots) CHECK(slot == doctest::Approx(2.0));
  CHECK(model.predict_at(t0 + 5 * 900) == doctest::Approx(2.0));

  const DailyProfileModel constant =
      daily_profile(std::vector<double>(192, 7.0), index, ProfileMode::mean, 0.9, utc);
  for (double slot : constant.slots) CHECK(slot == 7.0);
}

TEST_CASE("daily profile: slot [1,3] in mean mode gives 2; empty slot errors") {
  TimeZoneRule utc{0, false};
  const UnixSeconds t0 = parse_utc("2020-01-01T00:00:00Z");
  std::vector<UnixSeconds> index;
  std::vector<double> y;
  for (int day = 0; day < 2; ++day)
    for (int slot = 0; slot < 96; ++slot) {
      index.push_back(t0 + (day * 96 + slot) * 900);
      y.push_back(slot == 7 ? (day == 0 ? 1.0 : 3.0) : 5.0);
    }
  const DailyProfileModel model = daily_profile(y, index, ProfileMode::mean, 0.9, utc);
  CHECK(model.slots[7] == doctest::Approx(2.0));

  // Half a day only: the later slots have no observations.
  std::vector<UnixSeconds> half(index.begin(), index.begin() + 48);
  std::vector<double> half_y(y.begin(), y.begin() + 48);
  CHECK_THROWS_AS(daily_profile(half_y, half, ProfileMode::mean, 0.9, utc), DataError);
}

TEST_CASE("daily profile recovers a sinusoid under noise") {
  TimeZoneRule utc{0, false};
  Rng rng(36);
  const UnixSeconds t0 = parse_utc("2020-01-01T00:00:00Z");
  const int days = 300;
  std::vector<UnixSeconds> index;
  std::vector<double> y;
  for (int day = 0; day < days; ++day)
    for (int slot = 0; slot < 96; ++slot) {
      index.push_back(t0 + (static_cast<UnixSeconds>(day) * 96 + slot) * 900);
      y.push_back(2.0 * std::sin(2.0 * 3.14159265358979 * slot / 96.0) + rng.normal(0, 0.5));
    }
  const DailyProfileModel model = daily_profile(y, index, ProfileMode::mean, 0.9, utc);
  for (int slot = 0; slot < 96; ++slot) {
    const double truth = 2.0 * std::sin(2.0 * 3.14159265358979 * slot / 96.0);
    CHECK(model.slots[static_cast<std::size_t>(slot)] == doctest::Approx(truth).epsilon(0.2).scale(1.0));
  }

  // Quantile mode shifts every slot upward.
  const DailyProfileModel q90 = daily_profile(y, index, ProfileMode::quantile, 0.9, utc);
  int above = 0;
  for (int slot = 0; slot < 96; ++slot)
    if (q90.slots[static_cast<std::size_t>(slot)] > model.slots[static_cast<std::size_t>(slot)])
      ++above;
  CHECK(above == 96);
}

TEST_CASE("daily profile serialization round-trip") {
  TimeZoneRule cet;
  std::vector<UnixSeconds> index;
  std::vector<double> y;
  const UnixSeconds t0 = parse_utc("2020-03-02T00:00:00Z");
  for (int i = 0; i < 96 * 3; ++i) {
    index.push_back(t0 + static_cast<UnixSeconds>(i) * 900);
    y.push_back(static_cast<double>(i % 96));
  }
  const DailyProfileModel model = daily_profile(y, index, ProfileMode::quantile, 0.8, cet);
  const auto path = std::filesystem::temp_directory_path() / "afrrcast_profile.json";
  model.save(path);
  const DailyProfileModel loaded = DailyProfileModel::load(path);
  CHECK(loaded.slots == model.slots);
  CHECK(loaded.mode == ProfileMode::quantile);
  CHECK(loaded.q == 0.8);
  for (int i = 0; i < 96; ++i)
    CHECK(loaded.predict_at(index[static_cast<std::size_t>(i)]) ==
          model.predict_at(index[static_cast<std::size_t>(i)]));
}
