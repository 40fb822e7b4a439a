#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "afrrcast/dataset/table_io.hpp"
#include "afrrcast/dataset/validate.hpp"
#include "afrrcast/errors.hpp"
#include "afrrcast/timestamp.hpp"
#include "afrrcast/timetable.hpp"
#include "afrrcast/util/rng.hpp"
#include "afrrcast/util/sha256.hpp"

using namespace afrrcast;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "afrrcast_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

Manifest two_column_manifest() {
  Manifest m;
  ColumnMeta a;
  a.name = "load";
  a.unit = "GW";
  a.kind = ColumnKind::day_ahead;
  m.columns.push_back(a);
  ColumnMeta t;
  t.name = "afrr_pos";
  t.unit = "GW";
  t.kind = ColumnKind::target;
  m.columns.push_back(t);
  m.target_positive = "afrr_pos";
  return m;
}

}  // namespace

TEST_CASE("utc parse and format round-trip") {
  const UnixSeconds t = parse_utc("2021-07-14T09:15:00Z");
  CHECK(format_utc(t) == "2021-07-14T09:15:00Z");
  CHECK(parse_utc("2021-07-14 09:15") == t);
  CHECK(parse_utc("2021-07-14T09:15:00+00:00") == t);
  CHECK_THROWS_AS(parse_utc("2021-07-14T09:15:00+02:00"), DataError);
  CHECK_THROWS_AS(parse_utc("garbage"), DataError);
}

TEST_CASE("quarter-hour grid check") {
  CHECK(on_quarter_hour_grid(parse_utc("2020-01-01T00:45:00Z")));
  CHECK_FALSE(on_quarter_hour_grid(parse_utc("2020-01-01T00:20:00Z")));
}

TEST_CASE("central european time offsets around the DST switches") {
  TimeZoneRule cet;  // UTC+1 with EU summer time
  // 2021: summer time starts March 28 01:00 UTC, ends October 31 01:00 UTC.
  CHECK(cet.offset_minutes_at(parse_utc("2021-03-28T00:45:00Z")) == 60);
  CHECK(cet.offset_minutes_at(parse_utc("2021-03-28T01:00:00Z")) == 120);
  CHECK(cet.offset_minutes_at(parse_utc("2021-07-14T09:15:00Z")) == 120);
  CHECK(cet.offset_minutes_at(parse_utc("2021-10-31T00:45:00Z")) == 120);
  CHECK(cet.offset_minutes_at(parse_utc("2021-10-31T01:00:00Z")) == 60);

  const CivilTime local = cet.to_local(parse_utc("2021-07-14T07:15:00Z"));
  CHECK(local.hour == 9);
  CHECK(local.minute == 15);
}

TEST_CASE("weekday convention: 0 = Monday") {
  CHECK(weekday_of(parse_utc("2021-07-12T00:00:00Z")) == 0);  // Monday
  CHECK(weekday_of(parse_utc("2021-07-18T00:00:00Z")) == 6);  // Sunday
}

TEST_CASE("TimeTable rejects broken indices and duplicate columns") {
  const UnixSeconds t0 = parse_utc("2020-01-01T00:00:00Z");
  ColumnMeta m;
  m.name = "x";
  CHECK_THROWS_AS(TimeTable({t0, t0 + 1200}, {m}, {{1.0, 2.0}}), DataError);
  CHECK_THROWS_AS(TimeTable({t0, t0 + 900}, {m, m}, {{1.0, 2.0}, {3.0, 4.0}}), DataError);
  ColumnMeta bad_target;
  bad_target.name = "afrr_pos";
  bad_target.kind = ColumnKind::target;
  bad_target.unit = "MW";  // targets must be GW
  CHECK_THROWS_AS(TimeTable({t0}, {bad_target}, {{1.0}}), DataError);
}

TEST_CASE("load_table: well-formed input") {
  const auto path = temp_dir() / "ok.csv";
  std::ofstream(path) << "timestamp,load,afrr_pos\n"
                         "2020-01-01T00:00:00Z,1.5,0.2\n"
                         "2020-01-01T00:15:00Z,,0.3\n"
                         "2020-01-01T00:30:00Z,2.5,\n";
  const TimeTable table = load_table(path, two_column_manifest());
  CHECK(table.n_rows() == 3);
  CHECK(table.col("load")[0] == 1.5);
  CHECK(is_missing(table.col("load")[1]));
  CHECK(is_missing(table.col("afrr_pos")[2]));
}

TEST_CASE("load_table: off-grid timestamp fails with the row number") {
  const auto path = temp_dir() / "offgrid.csv";
  std::ofstream(path) << "timestamp,load,afrr_pos\n"
                         "2020-01-01T00:00:00Z,1,2\n"
                         "2020-01-01T00:20:00Z,1,2\n";
  try {
    load_table(path, two_column_manifest());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("load_table: gap in the grid fails") {
  const auto path = temp_dir() / "gap.csv";
  std::ofstream(path) << "timestamp,load,afrr_pos\n"
                         "2020-01-01T00:00:00Z,1,2\n"
                         "2020-01-01T00:45:00Z,1,2\n";
  CHECK_THROWS_AS(load_table(path, two_column_manifest()), DataError);
}

TEST_CASE("load_table: manifest column missing from the file is named") {
  const auto path = temp_dir() / "nocol.csv";
  std::ofstream(path) << "timestamp,afrr_pos\n2020-01-01T00:00:00Z,2\n";
  try {
    load_table(path, two_column_manifest());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("load") != std::string::npos);
  }
}

TEST_CASE("sign flip applies to the configured target") {
  const auto path = temp_dir() / "flip.csv";
  std::ofstream(path) << "timestamp,load,afrr_pos\n2020-01-01T00:00:00Z,1,-0.4\n";
  Manifest m = two_column_manifest();
  m.sign_flip_positive = true;
  const TimeTable table = load_table(path, m);
  CHECK(table.col("afrr_pos")[0] == doctest::Approx(0.4));
}

TEST_CASE("csv round-trip preserves values and missing pattern") {
  Rng rng(7);
  const std::size_t n = 200;
  std::vector<UnixSeconds> index(n);
  const UnixSeconds t0 = parse_utc("2020-06-01T00:00:00Z");
  for (std::size_t i = 0; i < n; ++i) index[i] = t0 + static_cast<UnixSeconds>(i) * 900;
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform() < 0.1 ? kMissing : rng.normal(0, 3.7);
    b[i] = rng.uniform() < 0.1 ? kMissing : rng.uniform(-1e6, 1e6);
  }
  ColumnMeta ma, mb;
  ma.name = "alpha series";
  mb.name = "beta,comma";  // exercises quoting
  const TimeTable table(index, {ma, mb}, {a, b});

  const auto path = temp_dir() / "roundtrip.csv";
  save_table(table, path);
  Manifest manifest;
  manifest.columns = {ma, mb};
  const TimeTable reloaded = load_table(path, manifest);
  CHECK(reloaded.equals(table));
}

TEST_CASE("index spacing of loaded tables is exactly 15 minutes everywhere") {
  const auto path = temp_dir() / "spacing.csv";
  {
    std::ofstream out(path);
    out << "timestamp,load,afrr_pos\n";
    const UnixSeconds t0 = parse_utc("2020-01-01T00:00:00Z");
    for (int i = 0; i < 300; ++i)
      out << format_utc(t0 + static_cast<UnixSeconds>(i) * 900) << ",1,1\n";
  }
  const TimeTable table = load_table(path, two_column_manifest());
  for (std::size_t i = 1; i < table.n_rows(); ++i)
    REQUIRE(table.index()[i] - table.index()[i - 1] == 900);
}

TEST_CASE("validate_schema findings") {
  const UnixSeconds t0 = parse_utc("2020-01-01T00:00:00Z");
  ColumnMeta load;
  load.name = "load";
  load.unit = "GW";
  load.kind = ColumnKind::day_ahead;
  std::vector<double> values = {1.0, kMissing, kMissing, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  std::vector<UnixSeconds> index;
  for (int i = 0; i < 10; ++i) index.push_back(t0 + i * 900);
  const TimeTable table(index, {load}, {values});

  Manifest manifest;
  manifest.columns = {load};

  SUBCASE("matching table yields no findings") {
    Manifest clean = manifest;
    const TimeTable full(index, {load}, {std::vector<double>(10, 1.0)});
    CHECK(validate_schema(full, clean).findings.empty());
  }
  SUBCASE("missing column is an error finding") {
    ColumnMeta other;
    other.name = "load_day_ahead";
    manifest.columns.push_back(other);
    const ValidationReport report = validate_schema(table, manifest);
    REQUIRE_FALSE(report.ok());
    bool named = false;
    for (const auto& f : report.findings)
      if (f.column == "load_day_ahead") named = true;
    CHECK(named);
  }
  SUBCASE("missing fraction reported with the fraction value") {
    std::vector<double> mostly_missing(10, kMissing);
    for (int i = 0; i < 7; ++i) mostly_missing[static_cast<std::size_t>(i)] = 1.0;
    const TimeTable holed(index, {load}, {mostly_missing});
    const ValidationReport report = validate_schema(holed, manifest);
    REQUIRE(report.missing_fraction.size() == 1);
    CHECK(report.missing_fraction[0].second == doctest::Approx(0.30));
    bool warned = false;
    for (const auto& f : report.findings)
      if (f.severity == Severity::warning && f.fraction == doctest::Approx(0.30)) warned = true;
    CHECK(warned);
  }
  SUBCASE("unit mismatch is an error finding") {
    Manifest wrong = manifest;
    wrong.columns[0].unit = "MW";
    CHECK_FALSE(validate_schema(table, wrong).ok());
  }
}

TEST_CASE("a full-width dataset: 85 features + 2 targets load as 87 columns") {
  Manifest manifest;
  for (int f = 0; f < 85; ++f) {
    ColumnMeta m;
    m.name = "feature_" + std::to_string(f);
    m.unit = "GW";
    m.kind = f % 2 == 0 ? ColumnKind::day_ahead : ColumnKind::actual;
    manifest.columns.push_back(std::move(m));
  }
  for (const char* target : {"afrr_pos", "afrr_neg"}) {
    ColumnMeta m;
    m.name = target;
    m.unit = "GW";
    m.kind = ColumnKind::target;
    manifest.columns.push_back(std::move(m));
  }
  manifest.target_positive = "afrr_pos";
  manifest.target_negative = "afrr_neg";

  const auto path = temp_dir() / "wide.csv";
  {
    std::ofstream out(path);
    out << "timestamp";
    for (const auto& c : manifest.columns) out << ',' << c.name;
    out << '\n';
    const UnixSeconds t0 = parse_utc("2019-07-01T00:00:00Z");
    for (int r = 0; r < 8; ++r) {
      out << format_utc(t0 + static_cast<UnixSeconds>(r) * 900);
      for (std::size_t c = 0; c < manifest.columns.size(); ++c) out << ',' << (r + 1);
      out << '\n';
    }
  }
  const TimeTable table = load_table(path, manifest);
  CHECK(table.n_cols() == 87);
  CHECK(table.n_rows() == 8);

  const TargetPair targets = target_pair(table, manifest);
  CHECK(targets.afrr_pos.size() == 8);
  CHECK(targets.afrr_neg[3] == 4.0);

  Manifest no_neg = manifest;
  no_neg.target_negative.clear();
  CHECK_THROWS_AS(target_pair(table, no_neg), DataError);
}

TEST_CASE("sha256 known vectors") {
  CHECK(Sha256::of_string("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256::of_string("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(Sha256::of_string("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}
