#include "afrrcast/gbt/tree.hpp"

#include <fstream>

#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"

namespace afrrcast {

int Tree::leaf_index_for(std::span<const double> row) const {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    const double v = row[static_cast<std::size_t>(n.feature)];
    const bool go_left = is_missing(v) ? n.default_left : v <= n.threshold;
    i = go_left ? n.left : n.right;
  }
  return i;
}

double Tree::value_for(std::span<const double> row) const {
  return nodes[leaf_index_for(row)].value;
}

double Ensemble::predict_row(std::span<const double> row) const {
  double out = base_score;
  for (const Tree& tree : trees) out += tree.value_for(row);
  return out;
}

std::vector<std::size_t> align_columns(const std::vector<std::string>& feature_names,
                                       const FeatureMatrix& matrix) {
  if (feature_names.size() != matrix.names.size())
    throw DataError("feature layout mismatch: model has " +
                    std::to_string(feature_names.size()) + " features, matrix has " +
                    std::to_string(matrix.names.size()));
  std::vector<std::size_t> perm(feature_names.size());
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    const auto it = std::find(matrix.names.begin(), matrix.names.end(), feature_names[i]);
    if (it == matrix.names.end())
      throw DataError("feature '" + feature_names[i] + "' missing from matrix");
    perm[i] = static_cast<std::size_t>(it - matrix.names.begin());
  }
  return perm;
}

std::vector<double> Ensemble::predict(const FeatureMatrix& matrix) const {
  const std::vector<std::size_t> perm = align_columns(feature_names, matrix);
  std::vector<double> out(matrix.n_rows());
  std::vector<double> row(feature_names.size());
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    for (std::size_t i = 0; i < perm.size(); ++i) row[i] = matrix.columns[perm[i]][r];
    out[r] = predict_row(row);
  }
  return out;
}

nlohmann::json Ensemble::to_json() const {
  nlohmann::json j;
  j["format"] = "afrrcast.model";
  j["version"] = 1;
  j["model_type"] = "gbt";
  j["base_score"] = base_score;
  j["loss"] = loss.name();
  j["learning_rate"] = learning_rate;
  j["feature_names"] = feature_names;
  nlohmann::json jtrees = nlohmann::json::array();
  for (const Tree& tree : trees) {
    nlohmann::json jnodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
      nlohmann::json jn;
      jn["f"] = n.feature;
      jn["c"] = n.cover;
      if (n.is_leaf()) {
        jn["v"] = n.value;
      } else {
        jn["t"] = n.threshold;
        jn["dl"] = n.default_left;
        jn["l"] = n.left;
        jn["r"] = n.right;
      }
      jnodes.push_back(std::move(jn));
    }
    jtrees.push_back(nlohmann::json{{"nodes", std::move(jnodes)}});
  }
  j["trees"] = std::move(jtrees);
  return j;
}

Ensemble Ensemble::from_json(const nlohmann::json& j) {
  if (j.value("format", std::string{}) != "afrrcast.model")
    throw DataError("not an afrrcast model file");
  if (j.value("version", 0) != 1)
    throw DataError("unsupported model version " + std::to_string(j.value("version", 0)));
  if (j.value("model_type", std::string{}) != "gbt")
    throw DataError("expected a gbt model, got '" + j.value("model_type", std::string{}) + "'");
  Ensemble e;
  e.base_score = j.at("base_score").get<double>();
  e.loss = LossSpec::from_name(j.at("loss").get<std::string>());
  e.learning_rate = j.value("learning_rate", 1.0);
  e.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  for (const auto& jt : j.at("trees")) {
    Tree tree;
    for (const auto& jn : jt.at("nodes")) {
      TreeNode n;
      n.feature = jn.at("f").get<int>();
      n.cover = jn.at("c").get<double>();
      if (n.feature < 0) {
        n.value = jn.at("v").get<double>();
      } else {
        n.threshold = jn.at("t").get<double>();
        n.default_left = jn.at("dl").get<bool>();
        n.left = jn.at("l").get<int>();
        n.right = jn.at("r").get<int>();
      }
      tree.nodes.push_back(n);
    }
    for (const TreeNode& n : tree.nodes) {
      if (!n.is_leaf() &&
          (n.left < 0 || n.right < 0 || n.left >= static_cast<int>(tree.nodes.size()) ||
           n.right >= static_cast<int>(tree.nodes.size())))
        throw DataError("model file has out-of-range child indices");
      if (n.feature >= static_cast<int>(e.feature_names.size()))
        throw DataError("model file references feature index beyond feature_names");
    }
    e.trees.push_back(std::move(tree));
  }
  return e;
}

void Ensemble::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model: " + path.string());
  out << to_json().dump(1) << '\n';
}

Ensemble Ensemble::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace afrrcast
