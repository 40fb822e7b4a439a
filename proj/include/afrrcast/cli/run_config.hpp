#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afrrcast/dataset/synth.hpp"
#include "afrrcast/features/variant.hpp"
#include "afrrcast/gbt/train.hpp"

namespace afrrcast {

/// One config file drives every command; --override key=value flags win over
/// file values. Every field has a documented default except the seeds, which
/// are mandatory so that no run is silently nondeterministic.
struct RunConfig {
  std::filesystem::path out_dir = "out";
  std::filesystem::path data_csv;       // default <out_dir>/data.csv
  std::filesystem::path manifest_path;  // default <out_dir>/manifest.json

  std::optional<nlohmann::json> synth;  // SynthSpec, parsed on demand

  struct Fetch {
    std::string url;
    std::string sha256;
    std::filesystem::path dest = "data";
  } fetch;

  struct Split {
    std::optional<std::uint64_t> seed;
    int continuous_days = 61;
  } split;

  ModelVariant variant{VariantName::extended, TargetSide::afrr_pos};
  LossSpec loss = LossSpec::l2();
  TrainConfig train;
  bool train_seed_present = false;
  std::vector<nlohmann::json> grid;  // per-cell overrides of `train`; empty = default grid

  struct Cv {
    int folds = 5;
    std::optional<std::uint64_t> seed;
  } cv;

  struct Explain {
    std::optional<std::uint64_t> seed;
    int sample_size = 1000;
    std::string split = "test";  // sample drawn from this split
    int dependency_top = 3;      // dependency data for the top-k features
    int trajectory_days = 1;     // trailing window of the continuous test set
  } explain;

  std::vector<std::string> report_runs;  // empty = all runs found on disk
  double metrics_q = 0.9;                // quantile for evaluation metrics
  int workers = 1;

  /// Run directory name, e.g. "extended_afrr_pos_q90".
  std::string run_name() const;
  std::filesystem::path run_dir() const;

  std::uint64_t require_seed(const std::optional<std::uint64_t>& seed,
                             const std::string& key) const;

  static RunConfig load(const std::filesystem::path& path,
                        const std::vector<std::string>& overrides);
  static RunConfig from_json(const nlohmann::json& j);
};

/// Applies "a.b.c=value" into a JSON document; the value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace afrrcast
