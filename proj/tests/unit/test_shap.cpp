#include <doctest.h>

#include <cmath>

#include "afrrcast/errors.hpp"
#include "afrrcast/gbt/train.hpp"
#include "afrrcast/shap/aggregate.hpp"
#include "afrrcast/shap/brute_shap.hpp"
#include "afrrcast/shap/tree_shap.hpp"
#include "afrrcast/timetable.hpp"
#include "afrrcast/util/rng.hpp"
#include "random_ensemble.hpp"

using namespace afrrcast;
using testing::random_ensemble;
using testing::random_row;

TEST_CASE("hand example: one split, covers 50/50, row routed right") {
  Ensemble e;
  e.base_score = 0.0;
  e.feature_names = {"f0", "f1"};
  Tree tree;
  tree.nodes.push_back({0, 0.5, true, 1, 2, 0.0, 100.0});
  tree.nodes.push_back({-1, 0, true, -1, -1, 0.0, 50.0});   // left leaf, value 0
  tree.nodes.push_back({-1, 0, true, -1, -1, 10.0, 50.0});  // right leaf, value 10
  e.trees.push_back(tree);

  CHECK(expected_value(e) == doctest::Approx(5.0));

  const std::vector<double> row = {0.9, 0.3};
  const Explanation exp = tree_shap(e, row);
  CHECK(exp.base_value == doctest::Approx(5.0));
  CHECK(exp.phi[0] == doctest::Approx(5.0));
  CHECK(exp.phi[1] == doctest::Approx(0.0));
  CHECK(exp.prediction == doctest::Approx(10.0));

  const Explanation brute = brute_shap(e, row);
  CHECK(brute.phi[0] == doctest::Approx(exp.phi[0]));
  CHECK(brute.phi[1] == doctest::Approx(0.0));
}

TEST_CASE("expected_value: empty ensemble and equal leaves") {
  Ensemble e;
  e.base_score = 3.25;
  e.feature_names = {"f0"};
  CHECK(expected_value(e) == 3.25);

  for (int t = 0; t < 3; ++t) {
    Tree tree;
    tree.nodes.push_back({0, 0.5, true, 1, 2, 0.0, 10.0});
    tree.nodes.push_back({-1, 0, true, -1, -1, 2.0, 4.0});
    tree.nodes.push_back({-1, 0, true, -1, -1, 2.0, 6.0});
    e.trees.push_back(std::move(tree));
  }
  CHECK(expected_value(e) == doctest::Approx(3.25 + 3 * 2.0));
}

TEST_CASE("empty ensemble explanation is all zeros") {
  Ensemble e;
  e.base_score = 1.5;
  e.feature_names = {"a", "b"};
  const Explanation exp = tree_shap(e, std::vector<double>{0.1, 0.2});
  CHECK(exp.base_value == 1.5);
  CHECK(exp.prediction == 1.5);
  for (double phi : exp.phi) CHECK(phi == 0.0);
}

TEST_CASE("duplicating a tree exactly doubles every contribution") {
  Rng rng(51);
  Ensemble e = random_ensemble(rng, 1, 3, 4);
  const std::vector<double> row = random_row(rng, 4, 0.2);
  const Explanation once = tree_shap(e, row);
  e.trees.push_back(e.trees[0]);
  const Explanation twice = tree_shap(e, row);
  for (std::size_t f = 0; f < once.phi.size(); ++f)
    CHECK(twice.phi[f] == doctest::Approx(2.0 * once.phi[f]).epsilon(1e-12));
}

TEST_CASE("oracle equivalence on random ensembles") {
  Rng rng(52);
  double worst = 0.0;
  for (int trial = 0; trial < 220; ++trial) {
    const int n_features = 1 + static_cast<int>(rng.below(8));
    const Ensemble e = random_ensemble(rng, 10, 4, n_features);
    const std::vector<double> row = random_row(rng, n_features, 0.2);
    const Explanation fast = tree_shap(e, row);
    const Explanation brute = brute_shap(e, row);
    REQUIRE(fast.phi.size() == brute.phi.size());
    for (std::size_t f = 0; f < fast.phi.size(); ++f)
      worst = std::max(worst, std::fabs(fast.phi[f] - brute.phi[f]));
    worst = std::max(worst, std::fabs(fast.base_value - brute.base_value));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("local accuracy on random ensembles, including missing rows") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_features = 2 + static_cast<int>(rng.below(6));
    const Ensemble e = random_ensemble(rng, 8, 4, n_features);
    const std::vector<double> row = random_row(rng, n_features, 0.3);
    const Explanation exp = tree_shap(e, row);
    double total = exp.base_value;
    for (double phi : exp.phi) total += phi;
    const double tol = 1e-8 * std::max(1.0, std::fabs(exp.prediction));
    REQUIRE(std::fabs(total - exp.prediction) <= tol);
  }
}

TEST_CASE("additivity: explanations of concatenated ensembles add up") {
  Rng rng(54);
  Ensemble a = random_ensemble(rng, 4, 3, 5);
  Ensemble b = random_ensemble(rng, 4, 3, 5);
  b.feature_names = a.feature_names;
  Ensemble both = a;
  both.base_score += b.base_score;
  for (const Tree& t : b.trees) both.trees.push_back(t);

  const std::vector<double> row = random_row(rng, 5, 0.1);
  const Explanation ea = tree_shap(a, row);
  const Explanation eb = tree_shap(b, row);
  const Explanation eab = tree_shap(both, row);
  for (std::size_t f = 0; f < 5; ++f)
    CHECK(eab.phi[f] == doctest::Approx(ea.phi[f] + eb.phi[f]).epsilon(1e-10));
  CHECK(eab.base_value == doctest::Approx(ea.base_value + eb.base_value));
}

TEST_CASE("dummy feature never split on has exactly zero attribution") {
  Rng rng(55);
  // Features 0..2 appear in trees; feature 3 never does.
  Ensemble e = random_ensemble(rng, 6, 3, 3);
  e.feature_names.push_back("dummy");
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> row = random_row(rng, 4, 0.2);
    const Explanation exp = tree_shap(e, row);
    CHECK(exp.phi[3] == 0.0);
    const Explanation brute = brute_shap(e, row);
    CHECK(brute.phi[3] == 0.0);
  }
}

TEST_CASE("symmetric features with identical roles get equal attribution") {
  // Two stumps with mirrored roles of f0/f1 and identical leaf layout.
  Ensemble e;
  e.base_score = 0.0;
  e.feature_names = {"f0", "f1"};
  for (int f = 0; f < 2; ++f) {
    Tree tree;
    tree.nodes.push_back({f, 0.5, true, 1, 2, 0.0, 10.0});
    tree.nodes.push_back({-1, 0, true, -1, -1, -1.0, 5.0});
    tree.nodes.push_back({-1, 0, true, -1, -1, 1.0, 5.0});
    e.trees.push_back(std::move(tree));
  }
  const Explanation exp = brute_shap(e, std::vector<double>{0.9, 0.9});
  CHECK(exp.phi[0] == doctest::Approx(exp.phi[1]));
  const Explanation fast = tree_shap(e, std::vector<double>{0.9, 0.9});
  CHECK(fast.phi[0] == doctest::Approx(fast.phi[1]));
}

TEST_CASE("single-feature model: phi equals f(x) minus the expectation") {
  Rng rng(56);
  const Ensemble e = random_ensemble(rng, 5, 3, 1);
  const std::vector<double> row = {0.42};
  const Explanation exp = brute_shap(e, row);
  CHECK(exp.phi[0] ==
        doctest::Approx(e.predict_row(row) - expected_value(e)).epsilon(1e-10));
}

TEST_CASE("brute_shap refuses layouts beyond the feature limit") {
  Rng rng(57);
  const Ensemble e = random_ensemble(rng, 2, 2, 13);
  CHECK_THROWS_AS(brute_shap(e, random_row(rng, 13, 0.0)), UsageError);
}

TEST_CASE("zero-cover internal node is an error") {
  Ensemble e;
  e.base_score = 0.0;
  e.feature_names = {"f0"};
  Tree tree;
  tree.nodes.push_back({0, 0.5, true, 1, 2, 0.0, 0.0});
  tree.nodes.push_back({-1, 0, true, -1, -1, 1.0, 0.0});
  tree.nodes.push_back({-1, 0, true, -1, -1, 2.0, 0.0});
  e.trees.push_back(tree);
  CHECK_THROWS_AS(tree_shap(e, std::vector<double>{0.1}), Error);
  CHECK_THROWS_AS(expected_value(e), Error);
}

TEST_CASE("mean training attribution is approximately zero per feature") {
  Rng rng(58);
  const std::size_t n = 600;
  FeatureMatrix m;
  m.names = {"f0", "f1"};
  m.index.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.index[i] = static_cast<UnixSeconds>(i) * 900;
  m.columns.resize(2, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.columns[0][i] = rng.normal();
    m.columns[1][i] = rng.normal();
    y[i] = 2.0 * m.columns[0][i] - m.columns[1][i] + rng.normal(0, 0.1);
  }
  TrainConfig config;
  config.num_rounds = 60;
  config.max_leaves = 15;
  config.min_data_in_leaf = 10;
  config.learning_rate = 0.2;
  config.early_stopping_rounds = 0;
  auto [model, report] = fit(m, y, LossSpec::l2(), config);

  const std::vector<Explanation> explanations = tree_shap_all(model, m);
  std::vector<double> mean_phi(2, 0.0);
  double scale = 0.0;
  for (const Explanation& e : explanations) {
    mean_phi[0] += e.phi[0];
    mean_phi[1] += e.phi[1];
    scale += std::fabs(e.phi[0]) + std::fabs(e.phi[1]);
  }
  // Path-dependent attributions on the training set are centred up to the
  // difference between cover weighting and the empirical distribution.
  for (double v : mean_phi)
    CHECK(std::fabs(v / static_cast<double>(n)) <=
          0.05 * (scale / static_cast<double>(n)) + 1e-9);
}

TEST_CASE("importance: ranks, ties and the absolute-before-mean rule") {
  std::vector<Explanation> explanations(2);
  explanations[0].phi = {2.0, 0.0, 1.0};
  explanations[1].phi = {-2.0, 0.0, 1.0};
  const ImportanceTable table = importance(explanations, {"a", "b", "c"});
  CHECK(table.mean_abs_shap[0] == doctest::Approx(2.0));  // |2| and |-2| average to 2
  CHECK(table.mean_abs_shap[1] == 0.0);
  CHECK(table.rank[0] == 1);
  CHECK(table.rank[2] == 2);
  CHECK(table.rank[1] == 3);
  CHECK(table.by_rank() == std::vector<std::string>{"a", "c", "b"});

  std::vector<Explanation> zeros(3);
  for (auto& e : zeros) e.phi = {0.0, 0.0};
  const ImportanceTable flat = importance(zeros, {"x", "y"});
  CHECK(flat.mean_abs_shap == std::vector<double>{0.0, 0.0});
  CHECK(flat.rank == std::vector<int>{1, 2});  // ties keep feature order

  std::vector<Explanation> bad(1);
  bad[0].phi = {0.0};
  CHECK_THROWS_AS(importance(bad, {"x", "y"}), DataError);
  CHECK_THROWS_AS(importance(std::vector<Explanation>{}, {"x"}), DataError);
}

TEST_CASE("dependency data pairs values with attributions in row order") {
  std::vector<Explanation> explanations(3);
  explanations[0].phi = {0.5, 0.0};
  explanations[1].phi = {-0.5, 0.0};
  explanations[2].phi = {1.5, 0.0};
  const std::vector<double> values = {1.0, kMissing, 3.0};
  const DependencyData dep = dependency_data(explanations, values, "a", {"a", "b"});
  CHECK(dep.phi == std::vector<double>{0.5, -0.5, 1.5});
  CHECK(dep.value_missing == std::vector<bool>{false, true, false});
  CHECK_THROWS_AS(dependency_data(explanations, values, "ghost", {"a", "b"}), DataError);
}

TEST_CASE("dependency trend on a monotone synthetic target") {
  Rng rng(59);
  const std::size_t n = 800;
  FeatureMatrix m;
  m.names = {"x"};
  m.index.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.index[i] = static_cast<UnixSeconds>(i) * 900;
  std::vector<double> col(n);
  for (double& v : col) v = rng.uniform(-2.0, 2.0);
  m.columns.push_back(col);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * col[i] + rng.normal(0, 0.2);
  TrainConfig config;
  config.num_rounds = 60;
  config.max_leaves = 31;
  config.min_data_in_leaf = 10;
  config.learning_rate = 0.2;
  config.early_stopping_rounds = 0;
  auto [model, report] = fit(m, y, LossSpec::l2(), config);
  const std::vector<Explanation> explanations = tree_shap_all(model, m);
  const DependencyData dep = dependency_data(explanations, col, "x", {"x"});

  // Spearman-style check via concordant pairs on a subsample.
  int concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; i += 7)
    for (std::size_t j = i + 1; j < n; j += 13) {
      const double dv = dep.values[i] - dep.values[j];
      const double dp = dep.phi[i] - dep.phi[j];
      if (dv * dp > 0) ++concordant;
      else if (dv * dp < 0) ++discordant;
    }
  CHECK(concordant > 5 * discordant);
}
