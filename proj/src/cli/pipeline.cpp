#include "afrrcast/cli/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "afrrcast/dataset/fetch.hpp"
#include "afrrcast/dataset/table_io.hpp"
#include "afrrcast/dataset/validate.hpp"
#include "afrrcast/errors.hpp"
#include "afrrcast/eval/metrics.hpp"
#include "afrrcast/eval/reports.hpp"
#include "afrrcast/eval/splits.hpp"
#include "afrrcast/features/engineer.hpp"
#include "afrrcast/gbt/daily_profile.hpp"
#include "afrrcast/gbt/grid_search.hpp"
#include "afrrcast/shap/aggregate.hpp"
#include "afrrcast/shap/tree_shap.hpp"
#include "afrrcast/util/rng.hpp"

namespace afrrcast::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Writes artifacts atomically (temp file + rename) and removes everything
/// it wrote if the command fails before keep().
class ArtifactSet {
 public:
  ~ArtifactSet() {
    if (kept_) return;
    for (const fs::path& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      bool ok = static_cast<bool>(out);
      if (ok) {
        out << content;
        ok = static_cast<bool>(out);
      }
      if (!ok) {
        out.close();
        std::error_code ec;
        fs::remove(tmp, ec);
        throw DataError("cannot write " + path.string());
      }
    }
    fs::rename(tmp, path);
    written_.push_back(path);
  }

  void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

  void keep() { kept_ = true; }

 private:
  std::vector<fs::path> written_;
  bool kept_ = false;
};

void require_file(const fs::path& path, const std::string& produced_by) {
  if (!fs::exists(path))
    throw DataError("missing " + path.string() + "; run `afrrcast " + produced_by + "` first");
}

struct Workspace {
  TimeTable table;     // engineered table
  Manifest manifest;   // engineered manifest
  SplitPlan splits;
};

Workspace load_workspace(const RunConfig& config, bool with_splits = true) {
  const fs::path eng_csv = config.out_dir / "engineered.csv";
  const fs::path eng_manifest = config.out_dir / "engineered_manifest.json";
  require_file(eng_csv, "features");
  require_file(eng_manifest, "features");
  Manifest manifest = Manifest::load(eng_manifest);
  TimeTable table = load_table(eng_csv, manifest);
  SplitPlan splits;
  if (with_splits) {
    const fs::path splits_path = config.out_dir / "splits.json";
    require_file(splits_path, "split");
    splits = SplitPlan::load(splits_path);
    const std::size_t covered =
        splits.train.size() + splits.valid.size() + splits.test.size() +
        splits.continuous_test.size();
    if (covered != table.n_rows())
      throw DataError("splits.json covers " + std::to_string(covered) + " rows but table has " +
                      std::to_string(table.n_rows()) + "; re-run `afrrcast split`");
  }
  return {std::move(table), std::move(manifest), std::move(splits)};
}

std::string target_column_for(const Manifest& manifest, const ModelVariant& variant) {
  return manifest.target_column(variant.target == TargetSide::afrr_pos);
}

/// Rows of `rows` whose target is present; models never see missing targets.
std::vector<int> rows_with_target(const std::vector<int>& rows, const std::vector<double>& y) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (int r : rows)
    if (!is_missing(y[static_cast<std::size_t>(r)])) out.push_back(r);
  return out;
}

std::vector<double> gather(const std::vector<double>& values, const std::vector<int>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(values[static_cast<std::size_t>(r)]);
  return out;
}

std::vector<UnixSeconds> gather_index(const std::vector<UnixSeconds>& index,
                                      const std::vector<int>& rows) {
  std::vector<UnixSeconds> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(index[static_cast<std::size_t>(r)]);
  return out;
}

std::string model_type_of(const fs::path& model_path) {
  std::ifstream in(model_path);
  if (!in) throw DataError("cannot open model: " + model_path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model " + model_path.string() + " is not valid JSON: " + e.what());
  }
  return j.value("model_type", std::string{});
}

/// Predictions for arbitrary rows with either model type.
std::vector<double> predict_rows(const RunConfig& config, const Workspace& ws,
                                 const fs::path& model_path, const std::vector<int>& rows) {
  const std::string type = model_type_of(model_path);
  if (type == "daily_profile") {
    const DailyProfileModel model = DailyProfileModel::load(model_path);
    return model.predict(gather_index(ws.table.index(), rows));
  }
  const Ensemble model = Ensemble::load(model_path);
  const FeatureMatrix all = select_variant(ws.table, config.variant);
  return model.predict(all.subset(rows));
}

std::string predictions_csv(const std::vector<UnixSeconds>& index, const std::vector<double>& y,
                            const std::vector<double>& pred) {
  std::ostringstream out;
  out << "timestamp,actual,prediction\n";
  for (std::size_t i = 0; i < index.size(); ++i) {
    out << format_utc(index[i]) << ',';
    if (!is_missing(y[i])) out << format_double(y[i]);
    out << ',' << format_double(pred[i]) << '\n';
  }
  return out.str();
}

const std::vector<int>& split_rows(const SplitPlan& splits, const std::string& name) {
  if (name == "train") return splits.train;
  if (name == "valid") return splits.valid;
  if (name == "test") return splits.test;
  if (name == "continuous") return splits.continuous_test;
  throw UsageError("unknown split '" + name + "' (train|valid|test|continuous)");
}

TrainConfig cell_config(const TrainConfig& base, const json& overrides) {
  json merged = base.to_json();
  for (const auto& [key, value] : overrides.items()) merged[key] = value;
  return TrainConfig::from_json(merged);
}

struct TunedSetup {
  TrainConfig config;
  int rounds = 0;
};

/// Best hyper-parameters and frozen round count: from tuning.json when the
/// tune command ran, otherwise from an early-stopped fit of the config
/// defaults on the plan's validation set.
TunedSetup resolve_training(const RunConfig& config, const FeatureMatrix& features,
                            const std::vector<double>& y_all, const std::vector<int>& train_rows,
                            const std::vector<int>& valid_rows, json* tuning_used) {
  const fs::path tuning_path = config.run_dir() / "tuning.json";
  TrainConfig chosen = config.train;
  if (fs::exists(tuning_path)) {
    std::ifstream in(tuning_path);
    json j;
    in >> j;
    chosen = TrainConfig::from_json(j.at("best_config"));
    chosen.workers = config.workers;
    const int rounds = j.at("best_round").get<int>();
    if (tuning_used) *tuning_used = j;
    return {chosen, rounds};
  }
  FeatureMatrix train_x = features.subset(train_rows);
  FeatureMatrix valid_x = features.subset(valid_rows);
  auto [model, report] =
      fit(train_x, gather(y_all, train_rows), config.loss, chosen,
          ValidationSet{&valid_x, gather(y_all, valid_rows)});
  (void)model;
  if (tuning_used) {
    (*tuning_used)["source"] = "early-stopped fit of config defaults";
    (*tuning_used)["fit_report"] = report.to_json();
  }
  return {chosen, report.best_round == 0 ? chosen.num_rounds : report.best_round};
}

}  // namespace

void cmd_fetch(const RunConfig& config) {
  if (config.fetch.url.empty())
    throw UsageError("config has no fetch.url; the dataset can also be placed locally");
  if (config.fetch.sha256.empty())
    throw UsageError("config has no fetch.sha256; pin the expected checksum");
  const fs::path got = fetch_dataset(config.fetch.url, config.fetch.dest, config.fetch.sha256);
  std::cout << got.string() << '\n';
}

void cmd_synth(const RunConfig& config) {
  if (!config.synth) throw UsageError("config has no 'synth' section");
  const SynthSpec spec = SynthSpec::from_json(*config.synth);
  SynthResult result = synth_generate(spec);

  ArtifactSet artifacts;
  artifacts.write_text(config.out_dir / "data.csv", table_to_csv(result.table));
  artifacts.write_json(config.out_dir / "manifest.json", result.manifest.to_json());
  artifacts.write_json(config.out_dir / "synth_truth.json", result.truth);
  artifacts.keep();
}

void cmd_features(const RunConfig& config) {
  require_file(config.data_csv, "synth (or point data.csv at a local dataset)");
  require_file(config.manifest_path, "synth (or provide a manifest)");
  const Manifest manifest = Manifest::load(config.manifest_path);
  const TimeTable raw = load_table(config.data_csv, manifest);

  const ValidationReport report = validate_schema(raw, manifest);
  if (!report.ok()) throw DataError("schema validation failed:\n" + report.to_text());

  const TimeTable engineered = engineer_features(raw, manifest);

  // The engineered manifest describes the engineered table; sign flips were
  // already applied at ingest and must not run twice.
  Manifest out_manifest = manifest;
  out_manifest.columns.clear();
  for (const auto& name : engineered.names()) out_manifest.columns.push_back(engineered.meta(name));
  out_manifest.sign_flip_positive = false;
  out_manifest.sign_flip_negative = false;
  out_manifest.igcc_aggregates.clear();   // already materialized
  out_manifest.flow_balances.clear();
  out_manifest.forecast_errors.clear();
  out_manifest.ramp_exclude.clear();

  ArtifactSet artifacts;
  artifacts.write_text(config.out_dir / "engineered.csv", table_to_csv(engineered));
  artifacts.write_json(config.out_dir / "engineered_manifest.json", out_manifest.to_json());
  artifacts.keep();
}

void cmd_split(const RunConfig& config) {
  Workspace ws = load_workspace(config, /*with_splits=*/false);
  const std::uint64_t seed = config.require_seed(config.split.seed, "split.seed");
  const SplitPlan plan = make_splits(ws.table.index(), seed, config.split.continuous_days);
  ArtifactSet artifacts;
  artifacts.write_json(config.out_dir / "splits.json", plan.to_json());
  artifacts.keep();
}

void cmd_tune(const RunConfig& config) {
  if (config.variant.name == VariantName::daily_profile)
    throw UsageError("tune: the daily-profile baseline has no hyper-parameters");
  Workspace ws = load_workspace(config);
  const std::uint64_t cv_seed = config.require_seed(config.cv.seed, "cv.seed");
  config.require_seed(config.train_seed_present ? std::optional<std::uint64_t>(config.train.seed)
                                                : std::nullopt,
                      "train.seed");

  const FeatureMatrix features = select_variant(ws.table, config.variant);
  const std::vector<double>& y_all = ws.table.col(target_column_for(ws.manifest, config.variant));
  const std::vector<int> train_rows = rows_with_target(ws.splits.train, y_all);
  const std::vector<int> valid_rows = rows_with_target(ws.splits.valid, y_all);

  std::vector<TrainConfig> grid;
  if (config.grid.empty()) {
    grid = default_grid(config.train);
  } else {
    for (const auto& cell : config.grid) grid.push_back(cell_config(config.train, cell));
  }

  const FeatureMatrix train_x = features.subset(train_rows);
  const std::vector<double> train_y = gather(y_all, train_rows);
  const GridSearchResult result =
      cv_grid_search(train_x, train_y, grid, config.loss, config.cv.folds, cv_seed);

  // Freeze the boosting rounds with early stopping on the plan's validation
  // set, using the winning cell.
  FeatureMatrix valid_x = features.subset(valid_rows);
  const std::vector<double> valid_y = gather(y_all, valid_rows);
  auto [model, report] = fit(train_x, train_y, config.loss, result.best_config(),
                             ValidationSet{&valid_x, valid_y});
  (void)model;
  const int best_round = report.best_round == 0 ? result.best_config().num_rounds
                                                : report.best_round;

  json j;
  j["format"] = "afrrcast.tuning";
  j["version"] = 1;
  j["variant"] = to_string(config.variant.name);
  j["target"] = to_string(config.variant.target);
  j["loss"] = config.loss.name();
  j["cv"] = {{"folds", config.cv.folds}, {"seed", cv_seed}};
  j["workers"] = config.workers;
  json cells = json::array();
  for (const auto& cell : result.cells) {
    json c;
    c["config"] = cell.config.to_json();
    c["mean_loss"] = cell.mean_loss;
    c["fold_losses"] = cell.fold_losses;
    c["fold_best_rounds"] = cell.fold_best_rounds;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  j["best_index"] = result.best_index;
  j["best_config"] = result.best_config().to_json();
  j["best_round"] = best_round;
  j["stop_reason"] = report.stop_reason;

  ArtifactSet artifacts;
  artifacts.write_json(config.run_dir() / "tuning.json", j);
  artifacts.keep();
}

void cmd_train(const RunConfig& config) {
  Workspace ws = load_workspace(config);
  const std::vector<double>& y_all = ws.table.col(target_column_for(ws.manifest, config.variant));
  const std::vector<int> train_rows = rows_with_target(ws.splits.train, y_all);
  const std::vector<int> valid_rows = rows_with_target(ws.splits.valid, y_all);
  if (train_rows.empty()) throw DataError("train: no rows with a present target value");

  ArtifactSet artifacts;

  if (config.variant.name == VariantName::daily_profile) {
    std::vector<int> rows = train_rows;
    rows.insert(rows.end(), valid_rows.begin(), valid_rows.end());
    std::sort(rows.begin(), rows.end());
    const DailyProfileModel model = daily_profile(
        gather(y_all, rows), gather_index(ws.table.index(), rows),
        config.loss.is_quantile() ? ProfileMode::quantile : ProfileMode::mean, config.loss.q,
        ws.manifest.zone);
    artifacts.write_json(config.run_dir() / "model.json", model.to_json());
    json rep;
    rep["model_type"] = "daily_profile";
    rep["training_rows"] = rows.size();
    rep["workers"] = config.workers;
    artifacts.write_json(config.run_dir() / "fit_report.json", rep);
    artifacts.keep();
    return;
  }

  config.require_seed(config.train_seed_present ? std::optional<std::uint64_t>(config.train.seed)
                                                : std::nullopt,
                      "train.seed");
  const FeatureMatrix features = select_variant(ws.table, config.variant);

  json tuning_used = json::object();
  const TunedSetup setup =
      resolve_training(config, features, y_all, train_rows, valid_rows, &tuning_used);

  // Retrain on train + validation with the frozen round count; early
  // stopping has nothing left to stop on.
  const Ensemble model = fit_final(features, y_all, train_rows, valid_rows, config.loss,
                                   setup.config, setup.rounds);

  json rep;
  rep["model_type"] = "gbt";
  rep["config"] = setup.config.to_json();
  rep["rounds"] = setup.rounds;
  rep["trees"] = model.trees.size();
  rep["training_rows"] = train_rows.size() + valid_rows.size();
  rep["workers"] = config.workers;
  rep["tuning"] = tuning_used;

  artifacts.write_json(config.run_dir() / "model.json", model.to_json());
  artifacts.write_json(config.run_dir() / "fit_report.json", rep);
  artifacts.keep();
}

void cmd_predict(const RunConfig& config) {
  Workspace ws = load_workspace(config);
  const fs::path model_path = config.run_dir() / "model.json";
  require_file(model_path, "train");
  const std::vector<double>& y_all = ws.table.col(target_column_for(ws.manifest, config.variant));

  ArtifactSet artifacts;
  for (const std::string split : {"test", "continuous"}) {
    const std::vector<int>& rows = split_rows(ws.splits, split);
    const std::vector<double> pred = predict_rows(config, ws, model_path, rows);
    artifacts.write_text(config.run_dir() / ("predictions_" + split + ".csv"),
                         predictions_csv(gather_index(ws.table.index(), rows),
                                         gather(y_all, rows), pred));
  }
  artifacts.keep();
}

void cmd_evaluate(const RunConfig& config) {
  Workspace ws = load_workspace(config);
  const fs::path model_path = config.run_dir() / "model.json";
  require_file(model_path, "train");
  const std::string target_col = target_column_for(ws.manifest, config.variant);
  const std::vector<double>& y_all = ws.table.col(target_col);
  const double q_eval = config.loss.is_quantile() ? config.loss.q : config.metrics_q;

  std::vector<MetricReport> rows_out;
  for (const std::string split : {"test", "continuous"}) {
    const std::vector<int> rows = rows_with_target(split_rows(ws.splits, split), y_all);
    if (rows.empty()) continue;
    const std::vector<double> y = gather(y_all, rows);
    const std::vector<double> pred = predict_rows(config, ws, model_path, rows);

    const std::string variant_name = to_string(config.variant.name);
    const std::string target_name = to_string(config.variant.target);
    const std::string loss_name = config.loss.name();
    auto push = [&](const std::string& metric, double value) {
      rows_out.push_back({variant_name, target_name, loss_name, split, metric, value});
    };
    push("r2", r2(y, pred));
    push("mean_quantile_loss(" + format_double(q_eval) + ")",
         mean_quantile_loss(y, pred, q_eval));
    push("coverage", coverage(y, pred));

    const std::string bench_col =
        ws.manifest.benchmark_column(config.variant.target == TargetSide::afrr_pos);
    if (!bench_col.empty() && ws.table.has(bench_col)) {
      const std::vector<double> bench = gather(ws.table.col(bench_col), rows);
      for (MetricReport r : evaluate_benchmark(y, bench, {"quantile_loss", "coverage"}, q_eval,
                                               target_name, split))
        rows_out.push_back(std::move(r));
    }
  }
  if (rows_out.empty()) throw DataError("evaluate: no rows with target values in any split");

  ArtifactSet artifacts;
  artifacts.write_text(config.run_dir() / "metrics.csv", metric_reports_to_csv(rows_out));
  artifacts.keep();
}

void cmd_explain(const RunConfig& config) {
  if (config.variant.name == VariantName::daily_profile)
    throw UsageError("explain: the daily-profile baseline is not a tree model");
  Workspace ws = load_workspace(config);
  const fs::path model_path = config.run_dir() / "model.json";
  require_file(model_path, "train");
  if (model_type_of(model_path) != "gbt")
    throw UsageError("explain: model is not a tree ensemble");
  const Ensemble model = Ensemble::load(model_path);
  const FeatureMatrix all = select_variant(ws.table, config.variant);
  const std::vector<double>& y_all = ws.table.col(target_column_for(ws.manifest, config.variant));

  const std::uint64_t seed = config.require_seed(config.explain.seed, "explain.seed");

  // Sample from the requested split, without replacement, sorted by time.
  const std::vector<int>& pool = split_rows(ws.splits, config.explain.split);
  std::vector<int> sample = pool;
  if (static_cast<int>(sample.size()) > config.explain.sample_size) {
    Rng rng(seed);
    rng.shuffle(sample);
    sample.resize(static_cast<std::size_t>(config.explain.sample_size));
  }
  std::sort(sample.begin(), sample.end());
  if (sample.empty()) throw DataError("explain: split '" + config.explain.split + "' is empty");

  const FeatureMatrix sample_x = all.subset(sample);
  const std::vector<Explanation> explanations = tree_shap_all(model, sample_x, config.workers);

  // Explanation export: timestamp, prediction, base_value, one phi column
  // per feature (model feature order).
  std::ostringstream exp_csv;
  exp_csv << "timestamp,prediction,base_value";
  for (const auto& name : model.feature_names) exp_csv << ',' << csv_escape("phi " + name);
  exp_csv << '\n';
  for (std::size_t i = 0; i < explanations.size(); ++i) {
    const Explanation& e = explanations[i];
    exp_csv << format_utc(sample_x.index[i]) << ',' << format_double(e.prediction) << ','
            << format_double(e.base_value);
    for (double phi : e.phi) exp_csv << ',' << format_double(phi);
    exp_csv << '\n';
  }

  const ImportanceTable table = importance(explanations, model.feature_names);
  std::ostringstream imp_csv;
  imp_csv << "feature,mean_abs_shap,rank\n";
  const std::vector<std::string> ranked = table.by_rank();
  for (const std::string& feature : ranked) {
    const std::size_t f = static_cast<std::size_t>(
        std::find(table.features.begin(), table.features.end(), feature) -
        table.features.begin());
    imp_csv << csv_escape(feature) << ',' << format_double(table.mean_abs_shap[f]) << ','
            << table.rank[f] << '\n';
  }

  // Dependency pairs for the top-k features.
  std::ostringstream dep_csv;
  dep_csv << "feature,timestamp,value,phi\n";
  const int top_k = std::min<int>(config.explain.dependency_top,
                                  static_cast<int>(model.feature_names.size()));
  const auto perm = align_columns(model.feature_names, sample_x);
  for (int k = 0; k < top_k; ++k) {
    const std::string& feature = ranked[static_cast<std::size_t>(k)];
    const std::size_t model_idx = static_cast<std::size_t>(
        std::find(model.feature_names.begin(), model.feature_names.end(), feature) -
        model.feature_names.begin());
    const DependencyData dep = dependency_data(
        explanations, sample_x.columns[perm[model_idx]], feature, model.feature_names);
    for (std::size_t i = 0; i < dep.values.size(); ++i) {
      dep_csv << csv_escape(feature) << ',' << format_utc(sample_x.index[i]) << ',';
      if (!dep.value_missing[i]) dep_csv << format_double(dep.values[i]);
      dep_csv << ',' << format_double(dep.phi[i]) << '\n';
    }
  }

  // Trajectory with per-feature contributions over the trailing window of
  // the continuous test set.
  const std::vector<int>& cont = ws.splits.continuous_test;
  if (cont.empty()) throw DataError("explain: continuous test set is empty");
  const int window = std::min<int>(config.explain.trajectory_days * kSlotsPerDay,
                                   static_cast<int>(cont.size()));
  std::vector<int> traj_rows(cont.end() - window, cont.end());
  const FeatureMatrix traj_x = all.subset(traj_rows);
  const std::vector<Explanation> traj_exp = tree_shap_all(model, traj_x, config.workers);
  std::ostringstream traj_csv;
  traj_csv << "timestamp,actual,prediction,base_value";
  for (const auto& name : model.feature_names) traj_csv << ',' << csv_escape("phi " + name);
  traj_csv << '\n';
  for (std::size_t i = 0; i < traj_exp.size(); ++i) {
    const double y = y_all[static_cast<std::size_t>(traj_rows[i])];
    traj_csv << format_utc(traj_x.index[i]) << ',';
    if (!is_missing(y)) traj_csv << format_double(y);
    traj_csv << ',' << format_double(traj_exp[i].prediction) << ','
             << format_double(traj_exp[i].base_value);
    for (double phi : traj_exp[i].phi) traj_csv << ',' << format_double(phi);
    traj_csv << '\n';
  }

  json meta;
  meta["seed"] = seed;
  meta["sample_size"] = explanations.size();
  meta["split"] = config.explain.split;
  meta["workers"] = config.workers;
  meta["trajectory_rows"] = traj_rows.size();

  ArtifactSet artifacts;
  artifacts.write_text(config.run_dir() / "explanations.csv", exp_csv.str());
  artifacts.write_text(config.run_dir() / "importance.csv", imp_csv.str());
  artifacts.write_text(config.run_dir() / "dependency.csv", dep_csv.str());
  artifacts.write_text(config.run_dir() / "trajectory.csv", traj_csv.str());
  artifacts.write_json(config.run_dir() / "explain_meta.json", meta);
  artifacts.keep();
}

void cmd_report(const RunConfig& config) {
  const fs::path runs_dir = config.out_dir / "runs";
  std::vector<std::string> runs = config.report_runs;
  if (runs.empty()) {
    if (fs::exists(runs_dir))
      for (const auto& entry : fs::directory_iterator(runs_dir))
        if (entry.is_directory()) runs.push_back(entry.path().filename().string());
    std::sort(runs.begin(), runs.end());
  }
  if (runs.empty())
    throw DataError("report: no runs found; run `afrrcast evaluate` (and `explain`) first");

  // Model comparison: union of all metric rows, grouped per (split, metric),
  // each group ordered via compare_models; benchmark duplicates collapse.
  std::vector<MetricReport> all_rows;
  std::set<std::string> seen_keys;
  for (const std::string& run : runs) {
    const fs::path metrics_path = runs_dir / run / "metrics.csv";
    if (!fs::exists(metrics_path))
      throw DataError("report: " + metrics_path.string() +
                      " missing; run `afrrcast evaluate` for that run first");
    std::ifstream in(metrics_path);
    std::stringstream buf;
    buf << in.rdbuf();
    for (MetricReport& r : metric_reports_from_csv(buf.str())) {
      const std::string key =
          r.variant + '|' + r.target + '|' + r.loss + '|' + r.split + '|' + r.metric;
      if (seen_keys.insert(key).second) all_rows.push_back(std::move(r));
    }
  }
  std::vector<std::pair<std::string, std::string>> groups;
  for (const MetricReport& r : all_rows) {
    const auto g = std::make_pair(r.split, r.metric);
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
  }
  std::sort(groups.begin(), groups.end());
  std::vector<MetricReport> comparison;
  for (const auto& [split, metric] : groups) {
    std::vector<MetricReport> group;
    for (const MetricReport& r : all_rows)
      if (r.split == split && r.metric == metric) group.push_back(r);
    for (MetricReport& r : compare_models(group)) comparison.push_back(std::move(r));
  }

  // Importance overview: the union of each run's four most important
  // features, reported for every run in the union with value and rank.
  struct RunImportance {
    std::string run;
    std::vector<std::string> features;  // rank order
    std::vector<double> values;
  };
  std::vector<RunImportance> importances;
  std::ostringstream dep_csv;
  dep_csv << "run,feature,timestamp,value,phi\n";
  std::ostringstream traj_csv;
  traj_csv << "run,timestamp,actual,prediction,base_value,feature,phi\n";
  bool any_explained = false;

  for (const std::string& run : runs) {
    const fs::path model_path = runs_dir / run / "model.json";
    if (!fs::exists(model_path) || model_type_of(model_path) != "gbt") continue;
    const fs::path importance_path = runs_dir / run / "importance.csv";
    if (!fs::exists(importance_path))
      throw DataError("report: " + importance_path.string() +
                      " missing; run `afrrcast explain` for that run first");
    any_explained = true;

    RunImportance ri;
    ri.run = run;
    {
      std::ifstream in(importance_path);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        ri.features.push_back(fields.at(0));
        ri.values.push_back(std::stod(fields.at(1)));
      }
    }
    importances.push_back(std::move(ri));

    {
      std::ifstream in(runs_dir / run / "dependency.csv");
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line))
        if (!line.empty()) dep_csv << run << ',' << line << '\n';
    }

    // Trajectory reshaped long: one row per (timestamp, feature), so the
    // bundle has one stable schema across variants with different features.
    {
      std::ifstream in(runs_dir / run / "trajectory.csv");
      std::string line;
      if (!std::getline(in, line))
        throw DataError("report: empty trajectory for run " + run);
      const std::vector<std::string> header = split_csv_line(line);
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        for (std::size_t c = 4; c < header.size(); ++c) {
          std::string feature = header[c];
          if (feature.rfind("phi ", 0) == 0) feature = feature.substr(4);
          traj_csv << run << ',' << fields.at(0) << ',' << fields.at(1) << ','
                   << fields.at(2) << ',' << fields.at(3) << ',' << csv_escape(feature) << ','
                   << fields.at(c) << '\n';
        }
      }
    }
  }

  std::ostringstream imp_csv;
  imp_csv << "run,feature,mean_abs_shap,rank\n";
  {
    // Union of top-4 features across runs, in first-appearance order.
    std::vector<std::string> union_features;
    for (const RunImportance& ri : importances)
      for (std::size_t k = 0; k < std::min<std::size_t>(4, ri.features.size()); ++k)
        if (std::find(union_features.begin(), union_features.end(), ri.features[k]) ==
            union_features.end())
          union_features.push_back(ri.features[k]);
    for (const RunImportance& ri : importances)
      for (const std::string& feature : union_features) {
        const auto it = std::find(ri.features.begin(), ri.features.end(), feature);
        if (it == ri.features.end()) continue;  // feature not in this variant
        const std::size_t pos = static_cast<std::size_t>(it - ri.features.begin());
        imp_csv << ri.run << ',' << csv_escape(feature) << ','
                << format_double(ri.values[pos]) << ',' << (pos + 1) << '\n';
      }
  }

  ArtifactSet artifacts;
  const fs::path report_dir = config.out_dir / "report";
  artifacts.write_text(report_dir / "model_comparison.csv", metric_reports_to_csv(comparison));
  if (any_explained) {
    artifacts.write_text(report_dir / "importance_overview.csv", imp_csv.str());
    artifacts.write_text(report_dir / "dependency_top_features.csv", dep_csv.str());
    artifacts.write_text(report_dir / "trajectory_contributions.csv", traj_csv.str());
  }
  artifacts.keep();
}

void run_command(const std::string& command, const RunConfig& config) {
  if (command == "fetch") return cmd_fetch(config);
  if (command == "synth") return cmd_synth(config);
  if (command == "features") return cmd_features(config);
  if (command == "split") return cmd_split(config);
  if (command == "tune") return cmd_tune(config);
  if (command == "train") return cmd_train(config);
  if (command == "predict") return cmd_predict(config);
  if (command == "evaluate") return cmd_evaluate(config);
  if (command == "explain") return cmd_explain(config);
  if (command == "report") return cmd_report(config);
  throw UsageError("unknown command '" + command + "'");
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Explainable boosted-tree toolkit for activated reserve prediction"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  int workers = 0;

  const std::vector<std::string> commands = {"fetch",   "synth",    "features", "split",
                                             "tune",    "train",    "predict",  "evaluate",
                                             "explain", "report"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--override", overrides, "key.path=value settings that win over the file");
    sub->add_option("--workers", workers, "worker threads for training and explanation");
  }

  try {
    std::vector<const char*> argv;
    argv.push_back("afrrcast");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "afrrcast: error: usage: " << e.what() << '\n';
    return 1;
  }

  try {
    RunConfig config = RunConfig::load(config_path, overrides);
    if (workers > 0) {
      config.workers = workers;
      config.train.workers = workers;
    }
    run_command(app.get_subcommands().front()->get_name(), config);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "afrrcast: error: usage: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "afrrcast: error: data: " << e.what() << '\n';
    return 2;
  } catch (const NetworkError& e) {
    std::cerr << "afrrcast: error: network: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "afrrcast: error: runtime: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace afrrcast::cli
