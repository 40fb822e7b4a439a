#include "afrrcast/cli/run_config.hpp"

#include <cstdlib>
#include <fstream>

#include "afrrcast/errors.hpp"

namespace afrrcast {

using nlohmann::json;

std::string RunConfig::run_name() const {
  return to_string(variant.name) + "_" + to_string(variant.target) + "_" + loss.tag();
}

std::filesystem::path RunConfig::run_dir() const {
  return out_dir / "runs" / run_name();
}

std::uint64_t RunConfig::require_seed(const std::optional<std::uint64_t>& seed,
                                      const std::string& key) const {
  if (!seed)
    throw UsageError("config is missing mandatory seed '" + key +
                     "'; seeds must be explicit so runs are reproducible");
  return *seed;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw UsageError("override must look like key.path=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // unquoted strings are taken literally
  }

  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (part.empty()) throw UsageError("override key '" + key + "' has an empty segment");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  for (const auto& o : overrides) apply_override(j, o);
  return from_json(j);
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;

  if (const char* env_out = std::getenv("AFRRCAST_OUT"); env_out && *env_out)
    c.out_dir = env_out;
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();

  if (j.contains("data")) {
    const auto& d = j.at("data");
    if (d.contains("csv")) c.data_csv = d.at("csv").get<std::string>();
    if (d.contains("manifest")) c.manifest_path = d.at("manifest").get<std::string>();
  }
  if (c.data_csv.empty()) c.data_csv = c.out_dir / "data.csv";
  if (c.manifest_path.empty()) c.manifest_path = c.out_dir / "manifest.json";

  if (j.contains("synth")) c.synth = j.at("synth");

  if (j.contains("fetch")) {
    const auto& f = j.at("fetch");
    c.fetch.url = f.value("url", std::string{});
    c.fetch.sha256 = f.value("sha256", std::string{});
    if (f.contains("dest")) c.fetch.dest = f.at("dest").get<std::string>();
  }

  if (j.contains("split")) {
    const auto& s = j.at("split");
    if (s.contains("seed")) c.split.seed = s.at("seed").get<std::uint64_t>();
    c.split.continuous_days = s.value("continuous_days", 61);
  }

  if (j.contains("model")) {
    const auto& m = j.at("model");
    if (m.contains("variant"))
      c.variant.name = variant_from_string(m.at("variant").get<std::string>());
    if (m.contains("target"))
      c.variant.target = target_from_string(m.at("target").get<std::string>());
    if (m.contains("loss")) {
      const auto& l = m.at("loss");
      if (l.is_string()) {
        c.loss = LossSpec::from_name(l.get<std::string>());
      } else {
        const std::string kind = l.value("kind", std::string{"l2"});
        c.loss = kind == "l2" ? LossSpec::l2() : LossSpec::quantile(l.value("q", 0.9));
      }
    }
  }

  if (j.contains("train")) {
    c.train = TrainConfig::from_json(j.at("train"));
    c.train_seed_present = j.at("train").contains("seed");
  }

  if (j.contains("grid")) {
    if (!j.at("grid").is_array()) throw UsageError("config: 'grid' must be an array");
    for (const auto& cell : j.at("grid")) c.grid.push_back(cell);
  }

  if (j.contains("cv")) {
    const auto& v = j.at("cv");
    c.cv.folds = v.value("folds", 5);
    if (v.contains("seed")) c.cv.seed = v.at("seed").get<std::uint64_t>();
  }

  if (j.contains("explain")) {
    const auto& e = j.at("explain");
    if (e.contains("seed")) c.explain.seed = e.at("seed").get<std::uint64_t>();
    c.explain.sample_size = e.value("sample_size", 1000);
    c.explain.split = e.value("split", std::string{"test"});
    c.explain.dependency_top = e.value("dependency_top", 3);
    c.explain.trajectory_days = e.value("trajectory_days", 1);
  }

  if (j.contains("report") && j.at("report").contains("runs"))
    c.report_runs = j.at("report").at("runs").get<std::vector<std::string>>();

  if (j.contains("metrics")) c.metrics_q = j.at("metrics").value("q", 0.9);
  c.workers = j.value("workers", 1);
  if (c.workers < 1) throw UsageError("config: workers must be >= 1");
  c.train.workers = c.workers;
  return c;
}

}  // namespace afrrcast
