#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "deacs/dataset.hpp"
#include "deacs/dea.hpp"
#include "deacs/discretize.hpp"
#include "deacs/error.hpp"
#include "deacs/folds.hpp"
#include "deacs/harness.hpp"
#include "deacs/infotheory.hpp"
#include "deacs/selector.hpp"
#include "deacs/table.hpp"

namespace py = pybind11;
using namespace deacs;

namespace {

Dataset load_dataset(const std::string& path, const std::string& class_col, const std::string& cuts_path,
                     std::size_t threads) {
    CsvOptions opts;
    opts.class_column = class_col;
    const auto table = load_csv(path, opts);
    const auto cuts = cuts_path.empty() ? fit_cuts(table, threads) : read_cuts(cuts_path);
    return encode(table, cuts);
}

SelectorParams make_params(double alpha, double beta, double gamma, bool beta_inverse, bool gamma_inverse,
                           bool normalize, std::size_t neighbors, std::size_t instances, std::uint64_t seed) {
    SelectorParams p;
    p.criterion = {alpha,
                   beta,
                   gamma,
                   beta_inverse ? Scaling::InverseSelectedCount : Scaling::Constant,
                   gamma_inverse ? Scaling::InverseSelectedCount : Scaling::Constant,
                   normalize ? Normalization::JointEntropy : Normalization::Plain};
    p.relieff = {neighbors, instances, seed};
    return p;
}

std::vector<ClassifierKind> parse_classifiers(const std::vector<std::string>& names, std::size_t k) {
    std::vector<ClassifierKind> out;
    for (const auto& n : names) {
        if (n == "nbc") out.push_back(ClassifierKind::naive_bayes());
        else if (n == "knn") out.push_back(ClassifierKind::nearest(k));
        else throw ConfigError("unknown classifier '" + n + "'");
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DEA-CS feature selection core";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<std::vector<std::vector<Code>>, std::vector<std::string>, std::vector<Code>,
                      std::vector<std::string>>(),
             py::arg("features"), py::arg("feature_names"), py::arg("classes"), py::arg("label_names"))
        .def_property_readonly("n_samples", &Dataset::n_samples)
        .def_property_readonly("n_features", &Dataset::n_features)
        .def_property_readonly("n_classes", &Dataset::n_classes)
        .def_property_readonly("feature_names",
                               [](const Dataset& d) {
                                   return std::vector<std::string>(d.feature_names().begin(), d.feature_names().end());
                               })
        .def_property_readonly("label_names",
                               [](const Dataset& d) {
                                   return std::vector<std::string>(d.label_names().begin(), d.label_names().end());
                               })
        .def_property_readonly("classes",
                               [](const Dataset& d) { return std::vector<Code>(d.classes().begin(), d.classes().end()); })
        .def("feature", [](const Dataset& d, std::size_t f) {
            const auto col = d.feature(f);
            return std::vector<Code>(col.begin(), col.end());
        });

    m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("class_col") = "", py::arg("cuts_path") = "",
          py::arg("threads") = 1, "Read a CSV, discretize numeric columns and encode it.");

    m.def("mdl_discretize", [](const std::vector<double>& values, const std::vector<Code>& classes) {
        return mdl_discretize(values, classes);
    });

    m.def("entropy", [](const std::vector<Code>& x) {
        std::size_t domain = 0;
        for (auto c : x) domain = std::max<std::size_t>(domain, c + 1);
        return entropy(x, domain);
    });
    m.def("mutual_information",
          [](const std::vector<Code>& x, const std::vector<Code>& y) { return mutual_information(x, y); });
    m.def(
        "conditional_mi",
        [](const std::vector<Code>& x, const std::vector<Code>& y, const std::vector<std::vector<Code>>& given) {
            BlockPartition part(x.size());
            for (std::size_t j = 0; j < given.size(); ++j) part = refine_partition(part, given[j], j);
            return conditional_mi(x, y, part);
        },
        py::arg("x"), py::arg("y"), py::arg("given") = std::vector<std::vector<Code>>{});
    m.def(
        "r_scores",
        [](const Dataset& ds, std::size_t feature, const std::vector<std::size_t>& given) {
            return r_scores(ds, feature, partition_by(ds, given)).values;
        },
        py::arg("dataset"), py::arg("feature"), py::arg("given") = std::vector<std::size_t>{});

    m.def(
        "dea_scores",
        [](const std::vector<std::vector<double>>& outputs) {
            const dea::DeaInstance inst(dea::Matrix::from_rows(outputs));
            std::vector<std::pair<double, double>> out;
            for (std::size_t p = 0; p < inst.n_dmus(); ++p) {
                const double sup = inst.n_dmus() == 1 ? std::numeric_limits<double>::infinity()
                                                      : dea::super_efficiency_score(inst, p).value;
                out.emplace_back(dea::ccr_score(inst, p).value, sup);
            }
            return out;
        },
        "(ccr, super-efficiency) per DMU for unit inputs.");

    m.def("algorithm_names", &algorithm_names);
    m.def(
        "select_json",
        [](const Dataset& ds, const std::string& algorithm, std::size_t delta, double alpha, double beta, double gamma,
           bool beta_inverse, bool gamma_inverse, bool normalize, std::size_t neighbors, std::size_t instances,
           std::uint64_t seed, std::size_t threads) {
            py::gil_scoped_release release;
            const auto params =
                make_params(alpha, beta, gamma, beta_inverse, gamma_inverse, normalize, neighbors, instances, seed);
            return trace_to_json(run_selector(algorithm, ds, delta, params, threads), ds);
        },
        py::arg("dataset"), py::arg("algorithm"), py::arg("delta"), py::arg("alpha") = 1.0, py::arg("beta") = 0.0,
        py::arg("gamma") = 0.0, py::arg("beta_inverse") = false, py::arg("gamma_inverse") = false,
        py::arg("normalize") = false, py::arg("relieff_neighbors") = 5, py::arg("relieff_instances") = 30,
        py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "evaluate_json",
        [](const Dataset& ds, const std::string& algorithm, const std::vector<std::size_t>& ranking, std::size_t folds,
           std::uint64_t seed, const std::vector<std::string>& classifiers, std::size_t knn_k, std::size_t threads) {
            py::gil_scoped_release release;
            SelectionTrace trace;
            trace.algorithm = algorithm;
            trace.delta = ranking.size();
            for (auto f : ranking) trace.selected.push_back({f, 0.0});
            const auto kinds = parse_classifiers(classifiers, knn_k);
            const std::vector<AccuracyCurve> curves{
                evaluate_curve(ds, trace, kinds, stratified_kfold(ds.classes(), folds, seed), threads)};
            return report_to_json(curves);
        },
        py::arg("dataset"), py::arg("algorithm"), py::arg("ranking"), py::arg("folds") = 10, py::arg("seed") = 0,
        py::arg("classifiers") = std::vector<std::string>{"nbc", "knn"}, py::arg("knn_k") = 1,
        py::arg("threads") = 1);
}
