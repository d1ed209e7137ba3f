#pragma once

#include <map>
#include <string>
#include <vector>

#include "gpfrm/engine.hpp"

namespace gpfrm {

struct AggregateRow {
    std::string dataset;
    double alpha = 0.0;
    int n_runs = 0;
    double mean_fitness = 0.0;
    double mean_cost = 0.0;
    double mean_nodes = 0.0;
    double rsd_fitness = 0.0;  // percent
    double rsd_cost = 0.0;
    double rsd_nodes = 0.0;
};

struct UsageHistogram {
    struct TargetCounts {
        int target = -1;
        int relationship_count = 0;
        std::map<int, int> feature_counts;  // feature index -> terminal occurrences
    };
    std::vector<TargetCounts> targets;  // most frequent species keys first
};

struct ConvergencePoint {
    int generation = 0;
    double median_fitness = 0.0;
    double median_size = 0.0;
};

/// 100 * population SD / mean; 0 when the mean is 0.
double rsd(const std::vector<double>& values);

/// Per-run means over emitted relationships, then mean and RSD across runs.
/// Runs with no valid relationships are skipped.
AggregateRow aggregate(const std::vector<RunResult>& results, const std::string& dataset,
                       double alpha);

UsageHistogram usage_histogram(const std::vector<RunResult>& results, int top_k = 5);

/// Per generation, the median across runs of the per-run median fitness and
/// size. Throws on mismatched generation counts.
std::vector<ConvergencePoint> emit_convergence(const std::vector<RunResult>& results);

}  // namespace gpfrm
