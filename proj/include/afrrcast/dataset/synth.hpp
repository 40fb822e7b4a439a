#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afrrcast/dataset/manifest.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

struct SynthFeatureSpec {
  std::string name;
  std::string process = "gaussian";  // gaussian | ar1 | daily_sine | uniform
  double mean = 0.0;
  double stddev = 1.0;
  double ar_coef = 0.9;     // ar1
  double amplitude = 1.0;   // daily_sine
  double phase = 0.0;       // daily_sine, in 15-min slots
  double low = 0.0;         // uniform
  double high = 1.0;
  ColumnKind kind = ColumnKind::day_ahead;
  Area area = Area::DE;
  bool dispatchable = false;
  double missing_fraction = 0.0;
  std::string unit = "a.u.";
};

struct SynthTermSpec {
  std::string feature;
  double coef = 1.0;
  std::string transform = "identity";  // identity | square | abs
};

struct SynthNoiseSpec {
  double stddev = 0.0;
  std::string het_feature;  // optional: noise scale grows with |feature|
  double het_scale = 0.0;
};

struct SynthTargetSpec {
  std::string name = "afrr_pos";
  std::vector<SynthTermSpec> terms;
  double intercept = 0.0;
  double daily_amplitude = 0.0;
  double daily_phase = 0.0;
  SynthNoiseSpec noise;
  bool clip_at_zero = false;
};

/// Benchmark series: the first target's clean signal plus a constant margin,
/// mimicking a procurement level fixed ahead of delivery.
struct SynthBenchmarkSpec {
  std::string name = "tendered";
  double margin = 0.0;
};

/// Deterministic desk-scale fixture. The target formula may reference only
/// declared features; the same spec and seed always produce bit-identical
/// output.
struct SynthSpec {
  std::size_t n_rows = 0;
  UnixSeconds start = 0;
  std::uint64_t seed = 0;
  std::vector<SynthFeatureSpec> features;
  std::vector<SynthTargetSpec> targets;
  std::optional<SynthBenchmarkSpec> benchmark;
  TimeZoneRule zone;
  /// Merged verbatim into the generated manifest's "engineering" section.
  nlohmann::json manifest_engineering = nlohmann::json::object();

  static SynthSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SynthResult {
  TimeTable table;
  Manifest manifest;
  nlohmann::json truth;  // which features drive each target, and the noise model
};

SynthResult synth_generate(const SynthSpec& spec);

/// Slot of the UTC day in [0, 96); the daily_sine process and target
/// sinusoids are functions of this slot.
int utc_slot_of(UnixSeconds t);

}  // namespace afrrcast
