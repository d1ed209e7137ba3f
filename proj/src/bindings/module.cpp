// Python bindings for the core mining operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gpfrm/artifacts.hpp"
#include "gpfrm/engine.hpp"
#include "gpfrm/report.hpp"

namespace py = pybind11;
using namespace gpfrm;

namespace {

FeatureMatrix matrix_from_columns(const std::vector<std::string>& names,
                                  const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size())
        throw DataError("names and columns must have the same length");
    FeatureMatrix matrix;
    matrix.names = names;
    matrix.columns = columns;
    matrix.m = columns.size();
    matrix.n = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != matrix.n) throw DataError("columns must have equal length");
    return matrix;
}

std::vector<std::vector<double>> corr_as_rows(const CorrMatrix& corr) {
    std::vector<std::vector<double>> rows(corr.m, std::vector<double>(corr.m));
    for (std::size_t i = 0; i < corr.m; ++i)
        for (std::size_t j = 0; j < corr.m; ++j) rows[i][j] = corr.at(i, j);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Feature relationship mining via speciated genetic programming";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def(py::init(&matrix_from_columns), py::arg("names"), py::arg("columns"))
        .def_readonly("names", &FeatureMatrix::names)
        .def_readonly("columns", &FeatureMatrix::columns)
        .def_readonly("n", &FeatureMatrix::n)
        .def_readonly("m", &FeatureMatrix::m)
        .def("__repr__", [](const FeatureMatrix& mat) {
            return "<FeatureMatrix " + std::to_string(mat.n) + "x" + std::to_string(mat.m) + ">";
        });

    py::class_<MatchSets>(m, "MatchSets")
        .def_readonly("threshold", &MatchSets::threshold)
        .def_readonly("sets", &MatchSets::sets)
        .def("matches", &MatchSets::matches, py::arg("feature"), py::arg("other"));

    m.def(
        "load_dataset",
        [](const std::string& path, const std::optional<std::string>& label_column,
           double missing_drop_fraction) {
            return clean_missing(load_csv(path, label_column), missing_drop_fraction);
        },
        py::arg("path"), py::arg("label_column") = std::nullopt,
        py::arg("missing_drop_fraction") = 0.1,
        "Load a headered CSV, drop the label column, and clean missing values.");

    m.def(
        "correlation_matrix",
        [](const FeatureMatrix& matrix) { return corr_as_rows(correlation_matrix(matrix)); },
        py::arg("matrix"), "Pairwise Pearson correlations as a list of rows.");

    m.def(
        "matching_sets",
        [](const FeatureMatrix& matrix, double threshold) {
            return matching_sets(correlation_matrix(matrix), threshold);
        },
        py::arg("matrix"), py::arg("threshold") = 0.95);

    m.def("pearson", &pearson, py::arg("x"), py::arg("f"));
    m.def("mae", &mae, py::arg("x"), py::arg("f"));

    py::class_<GpConfig>(m, "GpConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &GpConfig::population_size)
        .def_readwrite("generations", &GpConfig::generations)
        .def_readwrite("crossover_rate", &GpConfig::crossover_rate)
        .def_readwrite("mutation_rate", &GpConfig::mutation_rate)
        .def_readwrite("max_depth", &GpConfig::max_depth)
        .def_readwrite("tournament_size", &GpConfig::tournament_size)
        .def_readwrite("n_species", &GpConfig::n_species)
        .def_readwrite("alpha", &GpConfig::alpha)
        .def_readwrite("rng_seed", &GpConfig::rng_seed)
        .def_readwrite("feature_terminal_prob", &GpConfig::feature_terminal_prob)
        .def_readwrite("jobs", &GpConfig::jobs);

    py::class_<FeatureRelationship>(m, "FeatureRelationship")
        .def_readonly("target", &FeatureRelationship::target)
        .def_readonly("target_name", &FeatureRelationship::target_name)
        .def_readonly("infix", &FeatureRelationship::infix)
        .def_readonly("cost", &FeatureRelationship::cost)
        .def_readonly("raw_r", &FeatureRelationship::raw_r)
        .def_readonly("fitness", &FeatureRelationship::fitness)
        .def_readonly("size", &FeatureRelationship::size)
        .def_readonly("features_used", &FeatureRelationship::features_used)
        .def_readonly("feature_names_used", &FeatureRelationship::feature_names_used)
        .def("__repr__", [](const FeatureRelationship& fr) {
            return "<FeatureRelationship " + fr.target_name + " ~ " + fr.infix + ">";
        });

    py::class_<ConvergenceRecord>(m, "ConvergenceRecord")
        .def_readonly("generation", &ConvergenceRecord::generation)
        .def_readonly("median_fitness", &ConvergenceRecord::median_fitness)
        .def_readonly("median_size", &ConvergenceRecord::median_size)
        .def_readonly("best_fitness", &ConvergenceRecord::best_fitness)
        .def_readonly("species_count", &ConvergenceRecord::species_count);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("relationships", &RunResult::relationships)
        .def_readonly("degenerate", &RunResult::degenerate)
        .def_readonly("convergence", &RunResult::convergence)
        .def_readonly("rng_seed", &RunResult::rng_seed)
        .def_readonly("wall_seconds", &RunResult::wall_seconds);

    m.def(
        "run",
        [](const GpConfig& config, const FeatureMatrix& matrix,
           const std::optional<MatchSets>& match_sets) {
            py::gil_scoped_release release;
            return match_sets ? run(config, matrix, *match_sets) : run(config, matrix);
        },
        py::arg("config"), py::arg("matrix"), py::arg("match_sets") = std::nullopt);

    m.def(
        "run_batch",
        [](const GpConfig& config, const FeatureMatrix& matrix, int n_runs, int jobs,
           const std::optional<MatchSets>& match_sets) {
            py::gil_scoped_release release;
            const MatchSets ms =
                match_sets ? *match_sets : matching_sets(correlation_matrix(matrix));
            return run_batch(config, matrix, ms, n_runs, jobs);
        },
        py::arg("config"), py::arg("matrix"), py::arg("n_runs"), py::arg("jobs") = 1,
        py::arg("match_sets") = std::nullopt);

    py::class_<AggregateRow>(m, "AggregateRow")
        .def_readonly("dataset", &AggregateRow::dataset)
        .def_readonly("alpha", &AggregateRow::alpha)
        .def_readonly("n_runs", &AggregateRow::n_runs)
        .def_readonly("mean_fitness", &AggregateRow::mean_fitness)
        .def_readonly("mean_cost", &AggregateRow::mean_cost)
        .def_readonly("mean_nodes", &AggregateRow::mean_nodes)
        .def_readonly("rsd_fitness", &AggregateRow::rsd_fitness)
        .def_readonly("rsd_cost", &AggregateRow::rsd_cost)
        .def_readonly("rsd_nodes", &AggregateRow::rsd_nodes);

    m.def("aggregate", &aggregate, py::arg("results"), py::arg("dataset"), py::arg("alpha"));
    m.def("rsd", &rsd, py::arg("values"));
}
