#include "gpfrm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "gpfrm/scoring.hpp"

namespace gpfrm {

bool MatchSets::matches(int feature, int other) const {
    const auto& s = sets[feature];
    return std::binary_search(s.begin(), s.end(), other);
}

std::string CleanSummary::report() const {
    std::ostringstream out;
    out << "cleaning summary\n";
    out << "  features dropped: " << dropped_features.size();
    if (!dropped_features.empty()) {
        out << " (";
        for (std::size_t i = 0; i < dropped_features.size(); ++i) {
            if (i) out << ", ";
            out << dropped_features[i];
        }
        out << ")";
    }
    out << "\n  instances dropped: " << dropped_instances << "\n";
    out << "  kept: " << kept_instances << " instances x " << kept_features << " features\n";
    return out.str();
}

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool is_missing_marker(const std::string& cell) {
    return cell.empty() || cell == "?" || cell == "NA";
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// RFC-4180-ish: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace

RawTable load_csv(const std::string& path, const std::optional<std::string>& label_column) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot open " + path);

    std::string line;
    if (!std::getline(file, line)) throw DataError(path + ": empty file (header required)");

    RawTable table;
    for (auto& name : split_csv_line(line)) table.names.push_back(trim(name));
    const std::size_t header_width = table.names.size();

    // Resolve the label column before parsing: its cells are never numeric.
    std::size_t label_idx = header_width;  // sentinel: no label
    if (label_column) {
        auto it = std::find(table.names.begin(), table.names.end(), *label_column);
        if (it != table.names.end()) {
            label_idx = static_cast<std::size_t>(it - table.names.begin());
        } else {
            char* end = nullptr;
            const long parsed = std::strtol(label_column->c_str(), &end, 10);
            if (end == label_column->c_str() || *end != '\0' || parsed < 0 ||
                static_cast<std::size_t>(parsed) >= header_width)
                throw DataError(path + ": label column \"" + *label_column + "\" not found");
            label_idx = static_cast<std::size_t>(parsed);
        }
        table.names.erase(table.names.begin() + label_idx);
    }
    table.columns.resize(table.names.size());

    std::size_t row = 1;
    while (std::getline(file, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header_width)
            throw DataError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header_width));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) continue;
            const std::size_t col = c > label_idx && label_idx < header_width ? c - 1 : c;
            const std::string cell = trim(cells[c]);
            if (is_missing_marker(cell)) {
                table.columns[col].push_back(kMissing);
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw DataError(path + ": non-numeric cell \"" + cell + "\" at row " +
                                std::to_string(row) + ", column " + table.names[col]);
            table.columns[col].push_back(v);
        }
    }
    return table;
}

FeatureMatrix clean_missing(const RawTable& table, double feature_drop_fraction,
                            CleanSummary* summary) {
    if (feature_drop_fraction < 0.0 || feature_drop_fraction > 1.0)
        throw DataError("feature_drop_fraction must be in [0,1]");

    const std::size_t rows = table.rows();
    CleanSummary local;

    std::vector<std::size_t> kept_cols;
    for (std::size_t c = 0; c < table.cols(); ++c) {
        std::size_t missing = 0;
        for (double v : table.columns[c])
            if (std::isnan(v)) ++missing;
        const double fraction = rows == 0 ? 1.0 : static_cast<double>(missing) / rows;
        if (fraction > feature_drop_fraction) {
            local.dropped_features.push_back(table.names[c]);
        } else {
            kept_cols.push_back(c);
        }
    }

    std::vector<std::size_t> kept_rows;
    for (std::size_t r = 0; r < rows; ++r) {
        bool complete = true;
        for (std::size_t c : kept_cols) {
            if (std::isnan(table.columns[c][r])) {
                complete = false;
                break;
            }
        }
        if (complete) kept_rows.push_back(r);
    }
    local.dropped_instances = rows - kept_rows.size();
    local.kept_features = kept_cols.size();
    local.kept_instances = kept_rows.size();

    if (kept_rows.size() < 2)
        throw DataError("fewer than 2 instances remain after cleaning");
    if (kept_cols.size() < 2)
        throw DataError("fewer than 2 features remain after cleaning");

    FeatureMatrix matrix;
    matrix.n = kept_rows.size();
    matrix.m = kept_cols.size();
    for (std::size_t c : kept_cols) {
        matrix.names.push_back(table.names[c]);
        std::vector<double> column;
        column.reserve(kept_rows.size());
        for (std::size_t r : kept_rows) column.push_back(table.columns[c][r]);
        matrix.columns.push_back(std::move(column));
    }
    if (summary) *summary = local;
    return matrix;
}

CorrMatrix correlation_matrix(const FeatureMatrix& matrix) {
    CorrMatrix corr;
    corr.m = matrix.m;
    corr.values.assign(matrix.m * matrix.m, 0.0);
    std::vector<bool> constant(matrix.m, false);
    for (std::size_t i = 0; i < matrix.m; ++i) {
        const auto& col = matrix.columns[i];
        constant[i] = std::all_of(col.begin(), col.end(),
                                  [&](double v) { return v == col.front(); });
    }
    for (std::size_t i = 0; i < matrix.m; ++i) {
        corr.at(i, i) = constant[i] ? 0.0 : 1.0;
        for (std::size_t j = i + 1; j < matrix.m; ++j) {
            const double r = pearson(matrix.columns[i], matrix.columns[j]);
            corr.at(i, j) = r;
            corr.at(j, i) = r;
        }
    }
    return corr;
}

MatchSets matching_sets(const CorrMatrix& corr, double threshold) {
    if (threshold <= 0.0 || threshold > 1.0)
        throw DataError("match threshold must be in (0,1]");
    MatchSets sets;
    sets.threshold = threshold;
    sets.sets.resize(corr.m);
    for (std::size_t i = 0; i < corr.m; ++i) {
        sets.sets[i].push_back(static_cast<int>(i));
        for (std::size_t j = 0; j < corr.m; ++j) {
            if (j != i && std::fabs(corr.at(i, j)) > threshold)
                sets.sets[i].push_back(static_cast<int>(j));
        }
        std::sort(sets.sets[i].begin(), sets.sets[i].end());
    }
    return sets;
}

}  // namespace gpfrm
