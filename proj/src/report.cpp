#include "gpfrm/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gpfrm {

namespace {

double mean(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

double rsd(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("rsd: empty input");
    const double m = mean(values);
    if (m == 0.0) return 0.0;
    double sq = 0.0;
    for (double v : values) sq += (v - m) * (v - m);
    const double sd = std::sqrt(sq / static_cast<double>(values.size()));  // population SD
    return 100.0 * sd / m;
}

AggregateRow aggregate(const std::vector<RunResult>& results, const std::string& dataset,
                       double alpha) {
    if (results.empty()) throw std::invalid_argument("aggregate: no results");

    std::vector<double> run_fitness, run_cost, run_nodes;
    for (const auto& result : results) {
        if (result.relationships.empty()) continue;
        double f = 0.0, c = 0.0, s = 0.0;
        for (const auto& fr : result.relationships) {
            f += fr.fitness;
            c += fr.cost;
            s += fr.size;
        }
        const double k = static_cast<double>(result.relationships.size());
        run_fitness.push_back(f / k);
        run_cost.push_back(c / k);
        run_nodes.push_back(s / k);
    }
    if (run_fitness.empty())
        throw std::invalid_argument("aggregate: no run produced valid relationships");

    AggregateRow row;
    row.dataset = dataset;
    row.alpha = alpha;
    row.n_runs = static_cast<int>(run_fitness.size());
    row.mean_fitness = mean(run_fitness);
    row.mean_cost = mean(run_cost);
    row.mean_nodes = mean(run_nodes);
    row.rsd_fitness = rsd(run_fitness);
    row.rsd_cost = rsd(run_cost);
    row.rsd_nodes = rsd(run_nodes);
    return row;
}

UsageHistogram usage_histogram(const std::vector<RunResult>& results, int top_k) {
    if (results.empty()) throw std::invalid_argument("usage_histogram: no results");

    std::map<int, int> target_frequency;
    for (const auto& result : results)
        for (const auto& fr : result.relationships) ++target_frequency[fr.target];

    std::vector<std::pair<int, int>> ranked(target_frequency.begin(), target_frequency.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(ranked.size()) > top_k) ranked.resize(top_k);

    UsageHistogram histogram;
    for (const auto& [target, freq] : ranked) {
        UsageHistogram::TargetCounts counts;
        counts.target = target;
        counts.relationship_count = freq;
        for (const auto& result : results) {
            for (const auto& fr : result.relationships) {
                if (fr.target != target) continue;
                // Count every feature-terminal occurrence, duplicates included.
                std::vector<const Node*> stack{fr.tree.root.get()};
                while (!stack.empty()) {
                    const Node* node = stack.back();
                    stack.pop_back();
                    if (node->type == Node::Type::Feature) {
                        ++counts.feature_counts[node->feature];
                    } else if (node->type == Node::Type::Op) {
                        stack.push_back(node->right.get());
                        stack.push_back(node->left.get());
                    }
                }
            }
        }
        histogram.targets.push_back(std::move(counts));
    }
    return histogram;
}

std::vector<ConvergencePoint> emit_convergence(const std::vector<RunResult>& results) {
    if (results.empty()) throw std::invalid_argument("emit_convergence: no results");
    const std::size_t generations = results.front().convergence.size();
    for (const auto& result : results)
        if (result.convergence.size() != generations)
            throw std::invalid_argument("emit_convergence: mismatched generation counts");

    std::vector<ConvergencePoint> points;
    points.reserve(generations);
    for (std::size_t g = 0; g < generations; ++g) {
        std::vector<double> fitness, size;
        for (const auto& result : results) {
            fitness.push_back(result.convergence[g].median_fitness);
            size.push_back(result.convergence[g].median_size);
        }
        points.push_back({results.front().convergence[g].generation, median_of(std::move(fitness)),
                          median_of(std::move(size))});
    }
    return points;
}

}  // namespace gpfrm
