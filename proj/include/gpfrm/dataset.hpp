#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpfrm {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw CSV contents, column-major. Missing cells are stored as NaN.
struct RawTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t cols() const { return columns.size(); }
};

/// Cleaned numeric table: equal-length columns, no non-finite values.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::size_t n = 0;  // instances
    std::size_t m = 0;  // features
};

struct CorrMatrix {
    std::size_t m = 0;
    std::vector<double> values;  // row-major m*m

    double at(std::size_t i, std::size_t j) const { return values[i * m + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * m + j]; }
};

/// Per-feature sets of "matching" features: |r| strictly above the threshold,
/// plus the feature itself.
struct MatchSets {
    double threshold = 0.95;
    std::vector<std::vector<int>> sets;  // each sorted ascending

    bool matches(int feature, int other) const;
};

struct CleanSummary {
    std::vector<std::string> dropped_features;
    std::size_t dropped_instances = 0;
    std::size_t kept_features = 0;
    std::size_t kept_instances = 0;

    std::string report() const;
};

/// Load a headered CSV. `label_column` (name, or index if no name matches)
/// is removed when given. Cells must be numeric or one of the missing
/// markers "?", "NA", "" (stored as NaN).
RawTable load_csv(const std::string& path,
                  const std::optional<std::string>& label_column = std::nullopt);

/// Drop features whose missing fraction exceeds `feature_drop_fraction`,
/// then drop every instance still containing a missing value.
FeatureMatrix clean_missing(const RawTable& table, double feature_drop_fraction = 0.1,
                            CleanSummary* summary = nullptr);

CorrMatrix correlation_matrix(const FeatureMatrix& matrix);

MatchSets matching_sets(const CorrMatrix& corr, double threshold = 0.95);

}  // namespace gpfrm
