#include "afrrcast/dataset/synth.hpp"

#include <cmath>
#include <unordered_set>

#include "afrrcast/errors.hpp"
#include "afrrcast/util/rng.hpp"

namespace afrrcast {

namespace {

constexpr double kTwoPi = 6.283185307179586;

using nlohmann::json;

std::vector<double> generate_feature(const SynthFeatureSpec& f, std::size_t n,
                                     UnixSeconds start, Rng rng) {
  std::vector<double> values(n);
  if (f.process == "gaussian") {
    for (std::size_t i = 0; i < n; ++i) values[i] = rng.normal(f.mean, f.stddev);
  } else if (f.process == "uniform") {
    for (std::size_t i = 0; i < n; ++i) values[i] = rng.uniform(f.low, f.high);
  } else if (f.process == "ar1") {
    if (f.ar_coef <= -1.0 || f.ar_coef >= 1.0)
      throw DataError("feature '" + f.name + "': ar_coef must lie in (-1, 1)");
    const double stationary = f.stddev / std::sqrt(1.0 - f.ar_coef * f.ar_coef);
    double x = rng.normal(0.0, stationary);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = f.mean + x;
      x = f.ar_coef * x + rng.normal(0.0, f.stddev);
    }
  } else if (f.process == "daily_sine") {
    for (std::size_t i = 0; i < n; ++i) {
      const int slot = utc_slot_of(start + static_cast<UnixSeconds>(i) * kSlotSeconds);
      values[i] = f.amplitude * std::sin(kTwoPi * (slot + f.phase) / kSlotsPerDay);
    }
  } else {
    throw DataError("feature '" + f.name + "': unknown process '" + f.process + "'");
  }
  return values;
}

double apply_transform(const std::string& transform, double x, const std::string& feature) {
  if (transform == "identity") return x;
  if (transform == "square") return x * x;
  if (transform == "abs") return std::fabs(x);
  throw DataError("term on '" + feature + "': unknown transform '" + transform + "'");
}

}  // namespace

int utc_slot_of(UnixSeconds t) {
  std::int64_t sec = t % 86400;
  if (sec < 0) sec += 86400;
  return static_cast<int>(sec / kSlotSeconds);
}

SynthResult synth_generate(const SynthSpec& spec) {
  if (spec.n_rows == 0) throw DataError("synth: n_rows must be positive");
  if (!on_quarter_hour_grid(spec.start))
    throw DataError("synth: start timestamp must sit on the 15-minute grid");
  if (spec.targets.empty()) throw DataError("synth: at least one target required");
  if (spec.targets.size() > 2) throw DataError("synth: at most two targets supported");

  std::unordered_set<std::string> declared;
  for (const auto& f : spec.features) {
    if (!declared.insert(f.name).second)
      throw DataError("synth: duplicate feature '" + f.name + "'");
  }
  for (const auto& t : spec.targets) {
    for (const auto& term : t.terms)
      if (!declared.count(term.feature))
        throw DataError("synth: target '" + t.name + "' references undeclared feature '" +
                        term.feature + "'");
    if (!t.noise.het_feature.empty() && !declared.count(t.noise.het_feature))
      throw DataError("synth: noise of '" + t.name + "' references undeclared feature '" +
                      t.noise.het_feature + "'");
  }

  const std::size_t n = spec.n_rows;
  std::vector<UnixSeconds> index(n);
  for (std::size_t i = 0; i < n; ++i)
    index[i] = spec.start + static_cast<UnixSeconds>(i) * kSlotSeconds;

  const Rng root(spec.seed);

  // One independent stream per column and purpose, so the output does not
  // depend on generation order.
  std::vector<std::vector<double>> feature_values;
  feature_values.reserve(spec.features.size());
  for (std::size_t fi = 0; fi < spec.features.size(); ++fi) {
    const auto& f = spec.features[fi];
    std::vector<double> values =
        generate_feature(f, n, spec.start, root.fork(1000 + fi));
    if (f.missing_fraction > 0.0) {
      Rng holes = root.fork(2000 + fi);
      for (std::size_t i = 0; i < n; ++i)
        if (holes.uniform() < f.missing_fraction) values[i] = kMissing;
    }
    feature_values.push_back(std::move(values));
  }

  auto feature_column = [&](const std::string& name) -> const std::vector<double>& {
    for (std::size_t fi = 0; fi < spec.features.size(); ++fi)
      if (spec.features[fi].name == name) return feature_values[fi];
    throw DataError("synth: internal feature lookup failed for '" + name + "'");
  };

  std::vector<std::vector<double>> target_values;
  std::vector<std::vector<double>> clean_signals;
  for (std::size_t ti = 0; ti < spec.targets.size(); ++ti) {
    const auto& t = spec.targets[ti];
    Rng noise_rng = root.fork(3000 + ti);
    std::vector<double> clean(n, t.intercept);
    for (const auto& term : t.terms) {
      const auto& x = feature_column(term.feature);
      for (std::size_t i = 0; i < n; ++i) {
        if (is_missing(clean[i])) continue;
        if (is_missing(x[i])) {
          clean[i] = kMissing;  // a target built from a missing input is missing
        } else {
          clean[i] += term.coef * apply_transform(term.transform, x[i], term.feature);
        }
      }
    }
    if (t.daily_amplitude != 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (is_missing(clean[i])) continue;
        const int slot = utc_slot_of(index[i]);
        clean[i] += t.daily_amplitude * std::sin(kTwoPi * (slot + t.daily_phase) / kSlotsPerDay);
      }
    }
    const std::vector<double>* het = nullptr;
    if (!t.noise.het_feature.empty()) het = &feature_column(t.noise.het_feature);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double draw = noise_rng.normal();  // drawn every row to keep streams aligned
      if (is_missing(clean[i])) {
        y[i] = kMissing;
        continue;
      }
      double scale = t.noise.stddev;
      if (het != nullptr) {
        if (is_missing((*het)[i])) {
          y[i] = kMissing;
          continue;
        }
        scale += t.noise.het_scale * std::fabs((*het)[i]);
      }
      y[i] = clean[i] + scale * draw;
      if (t.clip_at_zero && y[i] < 0.0) y[i] = 0.0;
    }
    clean_signals.push_back(std::move(clean));
    target_values.push_back(std::move(y));
  }

  std::vector<ColumnMeta> meta;
  std::vector<std::vector<double>> columns;
  for (std::size_t fi = 0; fi < spec.features.size(); ++fi) {
    const auto& f = spec.features[fi];
    ColumnMeta m;
    m.name = f.name;
    m.unit = f.unit;
    m.kind = f.kind;
    m.area = f.area;
    m.dispatchable = f.dispatchable;
    meta.push_back(std::move(m));
    columns.push_back(feature_values[fi]);
  }
  for (std::size_t ti = 0; ti < spec.targets.size(); ++ti) {
    ColumnMeta m;
    m.name = spec.targets[ti].name;
    m.unit = "GW";
    m.kind = ColumnKind::target;
    meta.push_back(std::move(m));
    columns.push_back(target_values[ti]);
  }
  if (spec.benchmark) {
    ColumnMeta m;
    m.name = spec.benchmark->name;
    m.unit = "GW";
    m.kind = ColumnKind::benchmark;
    meta.push_back(std::move(m));
    std::vector<double> b = clean_signals[0];
    for (double& v : b)
      if (!is_missing(v)) v += spec.benchmark->margin;
    columns.push_back(std::move(b));
  }

  SynthResult result{TimeTable(std::move(index), meta, std::move(columns)), Manifest{}, {}};

  // Manifest for the generated table, so downstream commands treat synthetic
  // and real data identically.
  json mj;
  json cols = json::array();
  for (const auto& m : meta) {
    json c;
    c["name"] = m.name;
    c["unit"] = m.unit;
    c["kind"] = to_string(m.kind);
    c["area"] = to_string(m.area);
    c["native_resolution"] = m.native_resolution_minutes;
    if (m.dispatchable) c["dispatchable"] = true;
    cols.push_back(std::move(c));
  }
  mj["columns"] = std::move(cols);
  json targets;
  targets["positive"] = spec.targets[0].name;
  targets["negative"] = spec.targets.size() > 1 ? spec.targets[1].name : "";
  mj["targets"] = std::move(targets);
  if (spec.benchmark) {
    json b;
    b["positive"] = spec.benchmark->name;
    b["negative"] = "";
    mj["benchmark"] = std::move(b);
  }
  json zj;
  zj["standard_offset_minutes"] = spec.zone.standard_offset_minutes;
  zj["eu_dst"] = spec.zone.eu_dst;
  mj["zone"] = std::move(zj);
  mj["engineering"] = spec.manifest_engineering;
  result.manifest = Manifest::from_json(mj);

  json truth;
  truth["seed"] = spec.seed;
  truth["n_rows"] = spec.n_rows;
  json truth_targets = json::array();
  for (const auto& t : spec.targets) {
    json tt;
    tt["name"] = t.name;
    json drivers = json::array();
    std::unordered_set<std::string> seen;
    for (const auto& term : t.terms)
      if (seen.insert(term.feature).second) drivers.push_back(term.feature);
    tt["drivers"] = std::move(drivers);
    json terms = json::array();
    for (const auto& term : t.terms) {
      json te;
      te["feature"] = term.feature;
      te["coef"] = term.coef;
      te["transform"] = term.transform;
      terms.push_back(std::move(te));
    }
    tt["terms"] = std::move(terms);
    tt["intercept"] = t.intercept;
    tt["daily_amplitude"] = t.daily_amplitude;
    tt["daily_phase"] = t.daily_phase;
    json noise;
    noise["stddev"] = t.noise.stddev;
    noise["het_feature"] = t.noise.het_feature;
    noise["het_scale"] = t.noise.het_scale;
    tt["noise"] = std::move(noise);
    truth_targets.push_back(std::move(tt));
  }
  truth["targets"] = std::move(truth_targets);
  result.truth = std::move(truth);
  return result;
}

SynthSpec SynthSpec::from_json(const json& j) {
  SynthSpec spec;
  spec.n_rows = j.at("n_rows").get<std::size_t>();
  spec.start = j.contains("start") ? parse_utc(j.at("start").get<std::string>())
                                   : parse_utc("2019-07-01T00:00:00Z");
  if (!j.contains("seed")) throw UsageError("synth spec: 'seed' is mandatory");
  spec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jf : j.value("features", json::array())) {
    SynthFeatureSpec f;
    f.name = jf.at("name").get<std::string>();
    f.process = jf.value("process", std::string{"gaussian"});
    f.mean = jf.value("mean", 0.0);
    f.stddev = jf.value("stddev", 1.0);
    f.ar_coef = jf.value("ar_coef", 0.9);
    f.amplitude = jf.value("amplitude", 1.0);
    f.phase = jf.value("phase", 0.0);
    f.low = jf.value("low", 0.0);
    f.high = jf.value("high", 1.0);
    f.kind = column_kind_from_string(jf.value("kind", std::string{"day_ahead"}));
    f.area = area_from_string(jf.value("area", std::string{"DE"}));
    f.dispatchable = jf.value("dispatchable", false);
    f.missing_fraction = jf.value("missing_fraction", 0.0);
    f.unit = jf.value("unit", std::string{"a.u."});
    spec.features.push_back(std::move(f));
  }
  auto parse_target = [](const json& jt) {
    SynthTargetSpec t;
    t.name = jt.value("name", std::string{"afrr_pos"});
    for (const auto& jterm : jt.value("terms", json::array())) {
      SynthTermSpec term;
      term.feature = jterm.at("feature").get<std::string>();
      term.coef = jterm.value("coef", 1.0);
      term.transform = jterm.value("transform", std::string{"identity"});
      t.terms.push_back(std::move(term));
    }
    t.intercept = jt.value("intercept", 0.0);
    t.daily_amplitude = jt.value("daily_amplitude", 0.0);
    t.daily_phase = jt.value("daily_phase", 0.0);
    if (jt.contains("noise")) {
      const auto& jn = jt.at("noise");
      t.noise.stddev = jn.value("stddev", 0.0);
      t.noise.het_feature = jn.value("het_feature", std::string{});
      t.noise.het_scale = jn.value("het_scale", 0.0);
    }
    t.clip_at_zero = jt.value("clip_at_zero", false);
    return t;
  };
  if (j.contains("target")) spec.targets.push_back(parse_target(j.at("target")));
  for (const auto& jt : j.value("targets", json::array()))
    spec.targets.push_back(parse_target(jt));
  if (j.contains("benchmark")) {
    SynthBenchmarkSpec b;
    b.name = j.at("benchmark").value("name", std::string{"tendered"});
    b.margin = j.at("benchmark").value("margin", 0.0);
    spec.benchmark = b;
  }
  if (j.contains("zone")) {
    spec.zone.standard_offset_minutes = j.at("zone").value("standard_offset_minutes", 60);
    spec.zone.eu_dst = j.at("zone").value("eu_dst", true);
  }
  if (j.contains("manifest_engineering")) spec.manifest_engineering = j.at("manifest_engineering");
  return spec;
}

json SynthSpec::to_json() const {
  json j;
  j["n_rows"] = n_rows;
  j["start"] = format_utc(start);
  j["seed"] = seed;
  json feats = json::array();
  for (const auto& f : features) {
    json jf;
    jf["name"] = f.name;
    jf["process"] = f.process;
    jf["mean"] = f.mean;
    jf["stddev"] = f.stddev;
    jf["ar_coef"] = f.ar_coef;
    jf["amplitude"] = f.amplitude;
    jf["phase"] = f.phase;
    jf["low"] = f.low;
    jf["high"] = f.high;
    jf["kind"] = to_string(f.kind);
    jf["area"] = to_string(f.area);
    jf["dispatchable"] = f.dispatchable;
    jf["missing_fraction"] = f.missing_fraction;
    jf["unit"] = f.unit;
    feats.push_back(std::move(jf));
  }
  j["features"] = std::move(feats);
  json jtargets = json::array();
  for (const auto& t : targets) {
    json jt;
    jt["name"] = t.name;
    json terms = json::array();
    for (const auto& term : t.terms) {
      json jterm;
      jterm["feature"] = term.feature;
      jterm["coef"] = term.coef;
      jterm["transform"] = term.transform;
      terms.push_back(std::move(jterm));
    }
    jt["terms"] = std::move(terms);
    jt["intercept"] = t.intercept;
    jt["daily_amplitude"] = t.daily_amplitude;
    jt["daily_phase"] = t.daily_phase;
    json jn;
    jn["stddev"] = t.noise.stddev;
    jn["het_feature"] = t.noise.het_feature;
    jn["het_scale"] = t.noise.het_scale;
    jt["noise"] = std::move(jn);
    jt["clip_at_zero"] = t.clip_at_zero;
    jtargets.push_back(std::move(jt));
  }
  j["targets"] = std::move(jtargets);
  if (benchmark) {
    json b;
    b["name"] = benchmark->name;
    b["margin"] = benchmark->margin;
    j["benchmark"] = std::move(b);
  }
  json zj;
  zj["standard_offset_minutes"] = zone.standard_offset_minutes;
  zj["eu_dst"] = zone.eu_dst;
  j["zone"] = std::move(zj);
  if (!manifest_engineering.empty()) j["manifest_engineering"] = manifest_engineering;
  return j;
}

}  // namespace afrrcast
