#include "afrrcast/dataset/manifest.hpp"

#include <fstream>

#include "afrrcast/errors.hpp"

namespace afrrcast {

namespace {

using nlohmann::json;

ColumnMeta column_from_json(const json& j) {
  ColumnMeta m;
  m.name = j.at("name").get<std::string>();
  m.unit = j.value("unit", std::string{});
  m.kind = column_kind_from_string(j.value("kind", std::string{"actual"}));
  m.area = area_from_string(j.value("area", std::string{"DE"}));
  m.native_resolution_minutes = j.value("native_resolution", 15);
  if (m.native_resolution_minutes != 15 && m.native_resolution_minutes != 60 &&
      m.native_resolution_minutes != 240)
    throw DataError("column '" + m.name + "': native_resolution must be 15, 60 or 240");
  m.dispatchable = j.value("dispatchable", false);
  m.upsample = j.value("upsample", std::string{"pad"});
  if (m.upsample != "pad" && m.upsample != "linear")
    throw DataError("column '" + m.name + "': upsample must be 'pad' or 'linear'");
  if (j.contains("sources")) m.sources = j.at("sources").get<std::vector<std::string>>();
  return m;
}

json column_to_json(const ColumnMeta& m) {
  json j;
  j["name"] = m.name;
  j["unit"] = m.unit;
  j["kind"] = to_string(m.kind);
  j["area"] = to_string(m.area);
  j["native_resolution"] = m.native_resolution_minutes;
  if (m.dispatchable) j["dispatchable"] = true;
  if (m.upsample != "pad") j["upsample"] = m.upsample;
  if (!m.sources.empty()) j["sources"] = m.sources;
  return j;
}

}  // namespace

const ColumnMeta* Manifest::find(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return &c;
  return nullptr;
}

std::string Manifest::target_column(bool positive) const {
  const std::string& name = positive ? target_positive : target_negative;
  if (name.empty())
    throw DataError(std::string("manifest declares no ") + (positive ? "positive" : "negative") +
                    " target column");
  return name;
}

std::string Manifest::benchmark_column(bool positive) const {
  return positive ? benchmark_positive : benchmark_negative;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
  Manifest m;
  if (!j.contains("columns") || !j.at("columns").is_array())
    throw DataError("manifest: missing 'columns' array");
  for (const auto& jc : j.at("columns")) m.columns.push_back(column_from_json(jc));

  if (j.contains("targets")) {
    const auto& t = j.at("targets");
    m.target_positive = t.value("positive", std::string{});
    m.target_negative = t.value("negative", std::string{});
    m.sign_flip_positive = t.value("sign_flip_positive", false);
    m.sign_flip_negative = t.value("sign_flip_negative", false);
  }
  if (j.contains("benchmark")) {
    const auto& b = j.at("benchmark");
    m.benchmark_positive = b.value("positive", std::string{});
    m.benchmark_negative = b.value("negative", std::string{});
  }
  if (j.contains("zone")) {
    const auto& z = j.at("zone");
    m.zone.standard_offset_minutes = z.value("standard_offset_minutes", 60);
    m.zone.eu_dst = z.value("eu_dst", true);
  }
  if (j.contains("engineering")) {
    const auto& e = j.at("engineering");
    if (e.contains("ramp_exclude"))
      m.ramp_exclude = e.at("ramp_exclude").get<std::vector<std::string>>();
    for (const auto& p : e.value("forecast_errors", json::array())) {
      ForecastErrorSpec fe;
      fe.label = p.at("label").get<std::string>();
      fe.forecast = p.at("forecast").get<std::string>();
      fe.actual = p.at("actual").get<std::string>();
      fe.literal_name = p.value("literal_name", false);
      m.forecast_errors.push_back(std::move(fe));
    }
    if (e.contains("unscheduled_flow")) {
      // Shorthand for the flow error named exactly "unscheduled flow".
      const auto& u = e.at("unscheduled_flow");
      ForecastErrorSpec fe;
      fe.label = "unscheduled flow";
      fe.forecast = u.at("total").get<std::string>();
      fe.actual = u.at("physical").get<std::string>();
      fe.literal_name = true;
      m.forecast_errors.push_back(std::move(fe));
    }
    for (const auto& g : e.value("igcc_aggregates", json::array())) {
      IgccAggregateSpec spec;
      spec.name = g.at("name").get<std::string>();
      spec.members = g.at("members").get<std::vector<std::string>>();
      m.igcc_aggregates.push_back(std::move(spec));
    }
    for (const auto& f : e.value("flow_balances", json::array())) {
      FlowBalanceSpec spec;
      spec.name = f.at("name").get<std::string>();
      if (f.contains("inflows")) spec.inflows = f.at("inflows").get<std::vector<std::string>>();
      if (f.contains("outflows")) spec.outflows = f.at("outflows").get<std::vector<std::string>>();
      spec.kind = column_kind_from_string(f.value("kind", std::string{"actual"}));
      spec.unit = f.value("unit", std::string{"GW"});
      m.flow_balances.push_back(std::move(spec));
    }
  }
  return m;
}

nlohmann::json Manifest::to_json() const {
  json j;
  j["version"] = 1;
  json cols = json::array();
  for (const auto& c : columns) cols.push_back(column_to_json(c));
  j["columns"] = std::move(cols);
  json targets;
  targets["positive"] = target_positive;
  targets["negative"] = target_negative;
  if (sign_flip_positive) targets["sign_flip_positive"] = true;
  if (sign_flip_negative) targets["sign_flip_negative"] = true;
  j["targets"] = std::move(targets);
  if (!benchmark_positive.empty() || !benchmark_negative.empty()) {
    json b;
    b["positive"] = benchmark_positive;
    b["negative"] = benchmark_negative;
    j["benchmark"] = std::move(b);
  }
  json zj;
  zj["standard_offset_minutes"] = zone.standard_offset_minutes;
  zj["eu_dst"] = zone.eu_dst;
  j["zone"] = std::move(zj);
  json eng;
  eng["ramp_exclude"] = ramp_exclude;
  json fes = json::array();
  for (const auto& fe : forecast_errors) {
    json p;
    p["label"] = fe.label;
    p["forecast"] = fe.forecast;
    p["actual"] = fe.actual;
    if (fe.literal_name) p["literal_name"] = true;
    fes.push_back(std::move(p));
  }
  eng["forecast_errors"] = std::move(fes);
  json aggs = json::array();
  for (const auto& g : igcc_aggregates) {
    json p;
    p["name"] = g.name;
    p["members"] = g.members;
    aggs.push_back(std::move(p));
  }
  eng["igcc_aggregates"] = std::move(aggs);
  json flows = json::array();
  for (const auto& f : flow_balances) {
    json p;
    p["name"] = f.name;
    p["inflows"] = f.inflows;
    p["outflows"] = f.outflows;
    p["kind"] = to_string(f.kind);
    p["unit"] = f.unit;
    flows.push_back(std::move(p));
  }
  eng["flow_balances"] = std::move(flows);
  j["engineering"] = std::move(eng);
  return j;
}

TargetPair target_pair(const TimeTable& table, const Manifest& manifest) {
  TargetPair pair;
  pair.afrr_pos = table.col(manifest.target_column(true));
  pair.afrr_neg = table.col(manifest.target_column(false));
  return pair;
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void Manifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest: " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace afrrcast
