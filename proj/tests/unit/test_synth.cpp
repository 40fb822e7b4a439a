#include <doctest.h>

#include <cmath>

#include "afrrcast/dataset/synth.hpp"
#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"

using namespace afrrcast;

namespace {

SynthSpec small_spec() {
  SynthSpec spec;
  spec.n_rows = 500;
  spec.start = parse_utc("2019-07-01T00:00:00Z");
  spec.seed = 42;
  SynthFeatureSpec f1;
  f1.name = "f1";
  spec.features.push_back(f1);
  SynthFeatureSpec f2;
  f2.name = "f2";
  f2.process = "ar1";
  f2.ar_coef = 0.8;
  spec.features.push_back(f2);
  SynthTargetSpec target;
  target.name = "afrr_pos";
  target.terms.push_back({"f1", 2.0, "identity"});
  target.noise.stddev = 0.1;
  spec.targets.push_back(target);
  return spec;
}

}  // namespace

TEST_CASE("same spec and seed give bit-identical tables") {
  const SynthSpec spec = small_spec();
  const SynthResult a = synth_generate(spec);
  const SynthResult b = synth_generate(spec);
  CHECK(a.table.equals(b.table));
  CHECK(a.truth == b.truth);
}

TEST_CASE("different seeds give different tables") {
  SynthSpec spec = small_spec();
  const SynthResult a = synth_generate(spec);
  spec.seed = 43;
  const SynthResult b = synth_generate(spec);
  CHECK_FALSE(a.table.equals(b.table));
}

TEST_CASE("ground truth lists the driving features") {
  const SynthResult r = synth_generate(small_spec());
  const auto drivers = r.truth.at("targets").at(0).at("drivers");
  REQUIRE(drivers.size() == 1);
  CHECK(drivers.at(0).get<std::string>() == "f1");
}

TEST_CASE("target referencing an undeclared feature is rejected") {
  SynthSpec spec = small_spec();
  spec.targets[0].terms.push_back({"ghost", 1.0, "identity"});
  CHECK_THROWS_AS(synth_generate(spec), DataError);
}

TEST_CASE("generated manifest matches the table") {
  const SynthResult r = synth_generate(small_spec());
  CHECK(r.manifest.target_positive == "afrr_pos");
  CHECK(r.manifest.find("f1") != nullptr);
  CHECK(r.manifest.find("afrr_pos")->kind == ColumnKind::target);
  CHECK(r.table.meta("afrr_pos").unit == "GW");
}

TEST_CASE("daily sinusoid target: recovered 96-slot profile variance approaches a^2/2") {
  // For y_t = a*sin(2*pi*slot/96) + noise, the population variance of the 96
  // slot means is exactly a^2/2 (the slot mean over full periods is the
  // sinusoid itself; sum of sin^2 over an equally spaced full period is n/2).
  const double amplitude = 2.0;
  const int days = 200;
  SynthSpec spec;
  spec.n_rows = static_cast<std::size_t>(days) * 96;
  spec.start = parse_utc("2019-07-01T00:00:00Z");
  spec.seed = 7;
  SynthTargetSpec target;
  target.name = "afrr_pos";
  target.daily_amplitude = amplitude;
  target.noise.stddev = 0.5;
  spec.targets.push_back(target);

  const SynthResult r = synth_generate(spec);
  const auto& y = r.table.col("afrr_pos");

  std::vector<double> slot_sum(96, 0.0);
  std::vector<int> slot_count(96, 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int slot = utc_slot_of(r.table.index()[i]);
    slot_sum[static_cast<std::size_t>(slot)] += y[i];
    slot_count[static_cast<std::size_t>(slot)] += 1;
  }
  double mean_of_means = 0.0;
  std::vector<double> slot_mean(96);
  for (int s = 0; s < 96; ++s) {
    slot_mean[static_cast<std::size_t>(s)] =
        slot_sum[static_cast<std::size_t>(s)] / slot_count[static_cast<std::size_t>(s)];
    mean_of_means += slot_mean[static_cast<std::size_t>(s)];
  }
  mean_of_means /= 96.0;
  double variance = 0.0;
  for (int s = 0; s < 96; ++s) {
    const double d = slot_mean[static_cast<std::size_t>(s)] - mean_of_means;
    variance += d * d;
  }
  variance /= 96.0;

  const double expected = amplitude * amplitude / 2.0;  // = 2.0
  CHECK(variance == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("heteroscedastic noise scales with the configured feature") {
  SynthSpec spec;
  spec.n_rows = 20000;
  spec.start = parse_utc("2019-07-01T00:00:00Z");
  spec.seed = 11;
  SynthFeatureSpec f;
  f.name = "driver";
  f.process = "uniform";
  f.low = 0.0;
  f.high = 1.0;
  spec.features.push_back(f);
  SynthTargetSpec target;
  target.name = "afrr_pos";
  target.noise.stddev = 0.1;
  target.noise.het_feature = "driver";
  target.noise.het_scale = 2.0;
  spec.targets.push_back(target);

  const SynthResult r = synth_generate(spec);
  const auto& x = r.table.col("driver");
  const auto& y = r.table.col("afrr_pos");
  double low_ss = 0, high_ss = 0;
  int low_n = 0, high_n = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (x[i] < 0.25) {
      low_ss += y[i] * y[i];
      ++low_n;
    } else if (x[i] > 0.75) {
      high_ss += y[i] * y[i];
      ++high_n;
    }
  }
  // stddev ~ 0.1 + 2*|x|: low bucket ~ 0.35, high bucket ~ 1.85.
  CHECK(std::sqrt(low_ss / low_n) < 0.6);
  CHECK(std::sqrt(high_ss / high_n) > 1.4);
}
