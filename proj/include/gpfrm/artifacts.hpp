#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gpfrm/report.hpp"

namespace gpfrm {

/// Shortest exact decimal representation; round-trips through strtod.
std::string format_double(double v);

std::string relationships_to_json(const RunResult& result, const std::string& dataset,
                                  const std::vector<std::string>& names);

/// Inverse of relationships_to_json for the relationship lists; trees are
/// rebuilt from their prefix form.
struct ParsedRelationships {
    std::string dataset;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::vector<FeatureRelationship> relationships;
    std::vector<FeatureRelationship> degenerate;
};
ParsedRelationships relationships_from_json(const std::string& text,
                                            const std::vector<std::string>& names);

std::string convergence_to_csv(const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> convergence_from_csv(const std::string& text);

std::string meta_to_json(const RunResult& result, const std::string& dataset,
                         const std::string& data_path);

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> aggregate_from_csv(const std::string& text);

/// out/<dataset>/<alpha>/run_<k>/{relationships.json, convergence.csv, meta.json}
std::filesystem::path run_directory(const std::filesystem::path& out_dir,
                                    const std::string& dataset, double alpha, int run_index);

void write_run_artifacts(const std::filesystem::path& run_dir, const RunResult& result,
                         const std::string& dataset, const std::string& data_path,
                         const std::vector<std::string>& names);

struct BatchOptions {
    std::filesystem::path out_dir;
    std::string dataset;
    std::string data_path;
    std::vector<double> alphas;
    int runs = 1;
    int jobs = 1;
};

/// Runs `runs` seeded runs per alpha, writes per-run artifacts plus
/// out/<dataset>/aggregate.csv. Returns the aggregate rows.
std::vector<AggregateRow> run_batch_to_dir(const GpConfig& config, const FeatureMatrix& matrix,
                                           const MatchSets& match_sets,
                                           const BatchOptions& options);

}  // namespace gpfrm
