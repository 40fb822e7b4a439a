#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "afrrcast/dataset/synth.hpp"
#include "afrrcast/dataset/table_io.hpp"
#include "afrrcast/dataset/validate.hpp"
#include "afrrcast/errors.hpp"
#include "afrrcast/eval/metrics.hpp"
#include "afrrcast/eval/splits.hpp"
#include "afrrcast/features/engineer.hpp"
#include "afrrcast/features/variant.hpp"
#include "afrrcast/gbt/train.hpp"
#include "afrrcast/shap/aggregate.hpp"
#include "afrrcast/shap/brute_shap.hpp"
#include "afrrcast/shap/tree_shap.hpp"
#include "afrrcast/util/quantile.hpp"

namespace py = pybind11;
using namespace afrrcast;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style>& a) {
  if (a.ndim() != 1) throw UsageError("expected a 1-d float array");
  return std::vector<double>(a.data(), a.data() + a.shape(0));
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

FeatureMatrix matrix_from_numpy(const py::array_t<double, py::array::c_style>& values,
                                const std::vector<std::string>& names) {
  if (values.ndim() != 2) throw UsageError("expected a 2-d float array (rows x features)");
  if (static_cast<std::size_t>(values.shape(1)) != names.size())
    throw UsageError("column count does not match the name list");
  FeatureMatrix m;
  m.names = names;
  const auto n = static_cast<std::size_t>(values.shape(0));
  m.index.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.index[i] = static_cast<UnixSeconds>(i) * kSlotSeconds;
  m.columns.assign(names.size(), std::vector<double>(n));
  auto r = values.unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < names.size(); ++c) m.columns[c][i] = r(i, c);
  return m;
}

py::array_t<double> matrix_to_numpy(const FeatureMatrix& m) {
  py::array_t<double> out({m.n_rows(), m.n_cols()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    for (std::size_t c = 0; c < m.n_cols(); ++c) w(i, c) = m.columns[c][i];
  return out;
}

LossSpec loss_from_string(const std::string& name) { return LossSpec::from_name(name); }

TrainConfig config_from_dict(const py::dict& d) {
  nlohmann::json j;
  for (const auto& item : d) {
    const std::string key = py::cast<std::string>(item.first);
    if (key == "learning_rate" || key == "lambda") {
      j[key] = py::cast<double>(item.second);
    } else if (key == "seed") {
      j[key] = py::cast<std::uint64_t>(item.second);
    } else {
      j[key] = py::cast<long long>(item.second);
    }
  }
  return TrainConfig::from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Boosted-tree reserve prediction with exact additive explanations";

  py::register_exception<UsageError>(m, "UsageError");
  py::register_exception<DataError>(m, "DataError");

  py::class_<TimeTable>(m, "Table")
      .def_property_readonly("n_rows", &TimeTable::n_rows)
      .def_property_readonly("names", [](const TimeTable& t) { return t.names(); })
      .def("index_seconds",
           [](const TimeTable& t) {
             py::array_t<std::int64_t> out(static_cast<py::ssize_t>(t.n_rows()));
             std::copy(t.index().begin(), t.index().end(), out.mutable_data());
             return out;
           })
      .def("column", [](const TimeTable& t, const std::string& name) {
        return to_array(t.col(name));
      })
      .def("save", [](const TimeTable& t, const std::filesystem::path& path) {
        save_table(t, path);
      });

  py::class_<Manifest>(m, "Manifest")
      .def_static("load", &Manifest::load)
      .def("save", &Manifest::save)
      .def_property_readonly("target_positive",
                             [](const Manifest& m_) { return m_.target_positive; })
      .def_property_readonly("target_negative",
                             [](const Manifest& m_) { return m_.target_negative; });

  py::class_<FeatureMatrix>(m, "Features")
      .def_property_readonly("names", [](const FeatureMatrix& f) { return f.names; })
      .def_property_readonly("n_rows", &FeatureMatrix::n_rows)
      .def("to_numpy", &matrix_to_numpy)
      .def("index_seconds", [](const FeatureMatrix& f) {
        py::array_t<std::int64_t> out(static_cast<py::ssize_t>(f.index.size()));
        std::copy(f.index.begin(), f.index.end(), out.mutable_data());
        return out;
      });

  py::class_<FitReport>(m, "FitReport")
      .def_property_readonly("best_round", [](const FitReport& r) { return r.best_round; })
      .def_property_readonly("stop_reason", [](const FitReport& r) { return r.stop_reason; })
      .def_property_readonly("train_loss", [](const FitReport& r) { return r.train_loss; })
      .def_property_readonly("valid_loss", [](const FitReport& r) { return r.valid_loss; });

  py::class_<Ensemble>(m, "Model")
      .def_property_readonly("base_score", [](const Ensemble& e) { return e.base_score; })
      .def_property_readonly("n_trees", [](const Ensemble& e) { return e.trees.size(); })
      .def_property_readonly("feature_names",
                             [](const Ensemble& e) { return e.feature_names; })
      .def("predict",
           [](const Ensemble& e, const FeatureMatrix& features) {
             return to_array(e.predict(features));
           })
      .def("predict",
           [](const Ensemble& e, const py::array_t<double, py::array::c_style>& values) {
             return to_array(e.predict(matrix_from_numpy(values, e.feature_names)));
           })
      .def("expected_value", [](const Ensemble& e) { return expected_value(e); })
      .def("shap",
           [](const Ensemble& e, const py::array_t<double, py::array::c_style>& row) {
             const Explanation exp = tree_shap(e, to_vector(row));
             return py::make_tuple(exp.base_value, to_array(exp.phi), exp.prediction);
           })
      .def("shap_brute",
           [](const Ensemble& e, const py::array_t<double, py::array::c_style>& row) {
             const Explanation exp = brute_shap(e, to_vector(row));
             return py::make_tuple(exp.base_value, to_array(exp.phi), exp.prediction);
           })
      .def("save", &Ensemble::save)
      .def_static("load", &Ensemble::load);

  m.def("load_table", [](const std::filesystem::path& csv, const std::filesystem::path& manifest) {
    return load_table(csv, Manifest::load(manifest));
  });

  m.def("synth_generate", [](const std::string& spec_json) {
    const SynthSpec spec = SynthSpec::from_json(nlohmann::json::parse(spec_json));
    SynthResult r = synth_generate(spec);
    return py::make_tuple(std::move(r.table), std::move(r.manifest), r.truth.dump());
  });

  m.def("engineer_features",
        [](const TimeTable& table, const Manifest& manifest) {
          return engineer_features(table, manifest);
        });

  m.def("select_variant", [](const TimeTable& table, const std::string& variant,
                             const std::string& target) {
    return select_variant(table, {variant_from_string(variant), target_from_string(target)});
  });

  m.def("make_splits",
        [](const TimeTable& table, std::uint64_t seed, int continuous_days) {
          const SplitPlan plan = make_splits(table.index(), seed, continuous_days);
          py::dict out;
          out["train"] = plan.train;
          out["valid"] = plan.valid;
          out["test"] = plan.test;
          out["continuous_test"] = plan.continuous_test;
          return out;
        },
        py::arg("table"), py::arg("seed"), py::arg("continuous_days") = 61);

  m.def("subset",
        [](const FeatureMatrix& features, const std::vector<int>& rows) {
          return features.subset(rows);
        });

  m.def("fit",
        [](const FeatureMatrix& features, const py::array_t<double, py::array::c_style>& y,
           const std::string& loss, const py::dict& config) {
          auto [model, report] =
              fit(features, to_vector(y), loss_from_string(loss), config_from_dict(config));
          return py::make_tuple(std::move(model), std::move(report));
        },
        py::arg("features"), py::arg("y"), py::arg("loss") = "l2",
        py::arg("config") = py::dict());

  m.def("fit_validated",
        [](const FeatureMatrix& features, const py::array_t<double, py::array::c_style>& y,
           const FeatureMatrix& valid_x, const py::array_t<double, py::array::c_style>& valid_y,
           const std::string& loss, const py::dict& config) {
          const std::vector<double> vy = to_vector(valid_y);
          auto [model, report] = fit(features, to_vector(y), loss_from_string(loss),
                                     config_from_dict(config), ValidationSet{&valid_x, vy});
          return py::make_tuple(std::move(model), std::move(report));
        });

  m.def("r2", [](const py::array_t<double, py::array::c_style>& y,
                 const py::array_t<double, py::array::c_style>& pred) {
    return r2(to_vector(y), to_vector(pred));
  });
  m.def("mean_quantile_loss",
        [](const py::array_t<double, py::array::c_style>& y,
           const py::array_t<double, py::array::c_style>& pred, double q) {
          return mean_quantile_loss(to_vector(y), to_vector(pred), q);
        });
  m.def("coverage", [](const py::array_t<double, py::array::c_style>& y,
                       const py::array_t<double, py::array::c_style>& pred) {
    return coverage(to_vector(y), to_vector(pred));
  });
  m.def("quantile_linear", [](const py::array_t<double, py::array::c_style>& values, double q) {
    return quantile_linear(to_vector(values), q);
  });

  m.def("importance_table",
        [](const Ensemble& model, const FeatureMatrix& features, int workers) {
          const std::vector<Explanation> explanations =
              tree_shap_all(model, features, workers);
          const ImportanceTable table = importance(explanations, model.feature_names);
          py::dict out;
          out["features"] = table.features;
          out["mean_abs_shap"] = to_array(table.mean_abs_shap);
          out["rank"] = table.rank;
          return out;
        },
        py::arg("model"), py::arg("features"), py::arg("workers") = 1);
}
