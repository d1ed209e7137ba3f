#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gpfrm/expr.hpp"
#include "gpfrm/scoring.hpp"

namespace gpfrm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GpConfig {
    int population_size = 1000;
    int generations = 1000;
    double crossover_rate = 0.8;
    double mutation_rate = 0.2;
    int max_depth = 6;
    int tournament_size = 7;
    int n_species = 10;
    double alpha = 0.01;
    std::uint64_t rng_seed = 0;
    double feature_terminal_prob = 0.9;
    int jobs = 1;

    /// Rounds population_size up to a multiple of n_species.
    GpConfig normalized() const;
    void validate() const;
};

struct Individual {
    ExprTree tree;
    Output output;
    ClosestFeatureList cf;
    Score score;
    std::uint64_t id = 0;
};

using Rng = std::mt19937_64;

ExprTree grow_tree(int depth_budget, int feature_count, double feature_prob, Rng& rng);
ExprTree full_tree(int target_depth, int feature_count, double feature_prob, Rng& rng);

/// Ramped half-and-half over depths 2..max_depth, alternating grow/full.
std::vector<ExprTree> init_population(const GpConfig& config, int feature_count, Rng& rng);

/// One child: a copy of `a` with a uniformly chosen node replaced by a
/// uniformly chosen subtree of `b`. Retries up to 10 times on depth
/// overflow, then returns `a` unchanged.
ExprTree subtree_crossover(const ExprTree& a, const ExprTree& b, int max_depth, Rng& rng);

/// A uniformly chosen node is replaced by a freshly grown subtree within the
/// remaining depth budget; a chosen constant leaf is instead redrawn in U[0,1].
ExprTree subtree_mutation(const ExprTree& a, int max_depth, int feature_count,
                          double feature_prob, Rng& rng);

/// min(k, |members|) draws with replacement; lowest fitness wins, ties by id.
const Individual& tournament_select(const std::vector<const Individual*>& members,
                                    int k, Rng& rng);

struct Species;  // speciation.hpp

/// offspring_count - 1 children bred within the species (crossover or
/// mutation per the configured rates), then the seed appended unmodified.
std::vector<ExprTree> breed_species(const Species& species, int offspring_count,
                                    const GpConfig& config, int feature_count, Rng& rng);

}  // namespace gpfrm
