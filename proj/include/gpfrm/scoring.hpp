#pragma once

#include <vector>

#include "gpfrm/dataset.hpp"
#include "gpfrm/expr.hpp"

namespace gpfrm {

struct Score {
    double cost = 1.0;     // 1 - |r|
    double raw_r = 0.0;    // signed correlation with the target
    double fitness = 1.0;  // cost (+1 penalty on match-set overlap) + alpha * size
    int target = -1;
    int size = 0;
};

/// All features ranked by decreasing |r| against a tree output; a
/// permutation of 0..m-1 with ties broken by ascending index.
using ClosestFeatureList = std::vector<int>;

/// Signed Pearson correlation. Returns 0 when either vector is constant or
/// x contains non-finite values. Throws DataError on length mismatch.
double pearson(const std::vector<double>& x, const std::vector<double>& f);

/// Mean absolute error (diagnostic only, never a fitness).
double mae(const std::vector<double>& x, const std::vector<double>& f);

ClosestFeatureList closest_features(const Output& x, const FeatureMatrix& matrix);

/// Precomputed centered feature columns; turns the per-individual
/// all-features correlation pass into m dot products.
class CorrelationScorer {
public:
    explicit CorrelationScorer(const FeatureMatrix& matrix);

    /// Signed r against every feature; all zeros when x is non-finite or constant.
    std::vector<double> correlations(const Output& x) const;
    ClosestFeatureList closest(const std::vector<double>& correlations) const;

    std::size_t feature_count() const { return m_; }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> centered_;  // m * n
    std::vector<double> norms_;     // per-feature centered L2 norm
};

/// Two-case penalised fitness given a precomputed correlation.
Score score_from_r(double r, const ExprTree& tree, int target,
                   const MatchSets& match_sets, double alpha);

Score fitness(const Output& tree_output, const ExprTree& tree, int target,
              const FeatureMatrix& matrix, const MatchSets& match_sets, double alpha);

}  // namespace gpfrm
