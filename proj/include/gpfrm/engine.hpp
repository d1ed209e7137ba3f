#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpfrm/dataset.hpp"
#include "gpfrm/genetics.hpp"
#include "gpfrm/speciation.hpp"

namespace gpfrm {

struct FeatureRelationship {
    int target = -1;
    std::string target_name;
    ExprTree tree;
    std::string infix;
    double cost = 1.0;
    double raw_r = 0.0;
    double fitness = 1.0;
    int size = 0;
    std::vector<int> features_used;
    std::vector<std::string> feature_names_used;
};

struct ConvergenceRecord {
    int generation = 0;
    double median_fitness = 0.0;
    double median_size = 0.0;
    double best_fitness = 0.0;
    int species_count = 0;
};

struct RunResult {
    std::vector<FeatureRelationship> relationships;  // fitness < 1
    std::vector<FeatureRelationship> degenerate;     // match-set overlap, fitness >= 1
    std::vector<ConvergenceRecord> convergence;
    /// Per generation: (species key, seed fitness) sorted by key.
    std::vector<std::vector<std::pair<int, double>>> species_best;
    GpConfig config;
    std::uint64_t rng_seed = 0;
    double wall_seconds = 0.0;
};

/// Fills output, closest-feature list, and score (target = CF_0) for every
/// individual. Pure per individual; order-independent.
void evaluate_population(std::vector<Individual>& population, const FeatureMatrix& matrix,
                         const MatchSets& match_sets, double alpha);

RunResult run(const GpConfig& config, const FeatureMatrix& matrix,
              const MatchSets& match_sets);

/// Convenience overload: match sets at the default 0.95 threshold.
RunResult run(const GpConfig& config, const FeatureMatrix& matrix);

/// n_runs independent runs seeded base_seed + index, ordered by index.
/// jobs > 1 runs them on a thread pool; results are index-deterministic.
std::vector<RunResult> run_batch(const GpConfig& config, const FeatureMatrix& matrix,
                                 const MatchSets& match_sets, int n_runs, int jobs = 1);

}  // namespace gpfrm
