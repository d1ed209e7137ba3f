#include "gpfrm/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gpfrm {

namespace {

double column_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double clamp_r(double r) { return std::clamp(r, -1.0, 1.0); }

/// Near-constant vectors (e.g. f/(f/c), constant up to rounding) have a tiny
/// but nonzero variance; their correlation ratio is numerically meaningless
/// and can clamp to a fake |r| = 1. Treat them as constant.
bool negligible_variance(double centered_sq, std::size_t n, double mean) {
    const double sd = std::sqrt(centered_sq / static_cast<double>(n));
    return sd <= 1e-10 * std::max(1.0, std::fabs(mean));
}

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& f) {
    if (x.size() != f.size()) throw DataError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw DataError("pearson: need at least 2 instances");
    for (double v : x)
        if (!std::isfinite(v)) return 0.0;

    const double mx = column_mean(x);
    const double mf = column_mean(f);
    double num = 0.0, sx = 0.0, sf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double df = f[i] - mf;
        num += dx * df;
        sx += dx * dx;
        sf += df * df;
    }
    if (negligible_variance(sx, n, mx) || negligible_variance(sf, n, mf)) return 0.0;
    return clamp_r(num / (std::sqrt(sx) * std::sqrt(sf)));
}

double mae(const std::vector<double>& x, const std::vector<double>& f) {
    if (x.size() != f.size()) throw DataError("mae: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += std::fabs(x[i] - f[i]);
    return sum / static_cast<double>(x.size());
}

CorrelationScorer::CorrelationScorer(const FeatureMatrix& matrix)
    : n_(matrix.n), m_(matrix.m) {
    centered_.resize(m_ * n_);
    norms_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        const auto& col = matrix.columns[j];
        const double mean = column_mean(col);
        double sq = 0.0;
        double* row = centered_.data() + j * n_;
        for (std::size_t i = 0; i < n_; ++i) {
            row[i] = col[i] - mean;
            sq += row[i] * row[i];
        }
        norms_[j] = std::sqrt(sq);
    }
}

std::vector<double> CorrelationScorer::correlations(const Output& x) const {
    std::vector<double> rs(m_, 0.0);
    if (!x.finite) return rs;

    const double mean = column_mean(x.values);
    double sq = 0.0;
    for (double v : x.values) {
        const double d = v - mean;
        sq += d * d;
    }
    if (negligible_variance(sq, n_, mean)) return rs;
    const double norm_x = std::sqrt(sq);

    // Feature columns are centered, so dot(x, fc) equals the centered product sum.
    for (std::size_t j = 0; j < m_; ++j) {
        if (norms_[j] <= 0.0) continue;
        const double* fc = centered_.data() + j * n_;
        double dot = 0.0;
        for (std::size_t i = 0; i < n_; ++i) dot += x.values[i] * fc[i];
        rs[j] = clamp_r(dot / (norm_x * norms_[j]));
    }
    return rs;
}

ClosestFeatureList CorrelationScorer::closest(const std::vector<double>& rs) const {
    ClosestFeatureList order(rs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ra = std::fabs(rs[a]);
        const double rb = std::fabs(rs[b]);
        if (ra != rb) return ra > rb;
        return a < b;
    });
    return order;
}

ClosestFeatureList closest_features(const Output& x, const FeatureMatrix& matrix) {
    CorrelationScorer scorer(matrix);
    return scorer.closest(scorer.correlations(x));
}

Score score_from_r(double r, const ExprTree& tree, int target,
                   const MatchSets& match_sets, double alpha) {
    Score score;
    score.target = target;
    score.raw_r = r;
    score.cost = 1.0 - std::fabs(r);
    score.size = size(tree);
    bool overlap = false;
    for (int f : features_used(tree)) {
        if (match_sets.matches(target, f)) {
            overlap = true;
            break;
        }
    }
    const double base = overlap ? 1.0 + std::fabs(r) : 1.0 - std::fabs(r);
    score.fitness = base + alpha * score.size;
    return score;
}

Score fitness(const Output& tree_output, const ExprTree& tree, int target,
              const FeatureMatrix& matrix, const MatchSets& match_sets, double alpha) {
    const double r = tree_output.finite
                         ? pearson(tree_output.values, matrix.columns[target])
                         : 0.0;
    return score_from_r(r, tree, target, match_sets, alpha);
}

}  // namespace gpfrm
