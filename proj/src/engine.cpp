#include "gpfrm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace gpfrm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t run_seed, std::uint64_t generation,
                             std::uint64_t species_key) {
    return splitmix64(splitmix64(run_seed ^ (generation << 20)) ^ species_key);
}

void evaluate_individual(Individual& ind, TreeEvaluator& evaluator,
                         const CorrelationScorer& scorer, const MatchSets& match_sets,
                         double alpha) {
    ind.output = evaluator.evaluate(ind.tree);
    const auto rs = scorer.correlations(ind.output);
    ind.cf = scorer.closest(rs);
    const int target = ind.cf[0];
    ind.score = score_from_r(rs[target], ind.tree, target, match_sets, alpha);
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

/// Offspring per species: equal |P|/N_S when all species exist, otherwise
/// proportional to membership with every species guaranteed its seed slot
/// and the remainder going to the fittest (first) species.
std::vector<int> offspring_counts(const std::vector<Species>& species, int population_size,
                                  int n_species) {
    const int s = static_cast<int>(species.size());
    std::vector<int> counts(s, 0);
    if (s == n_species && population_size % s == 0) {
        std::fill(counts.begin(), counts.end(), population_size / s);
        return counts;
    }
    int total_members = 0;
    for (const auto& sp : species) total_members += static_cast<int>(sp.members.size());
    const int spare = population_size - s;
    int assigned = 0;
    for (int i = 0; i < s; ++i) {
        const int extra = static_cast<int>(
            static_cast<long long>(spare) * static_cast<int>(species[i].members.size()) /
            total_members);
        counts[i] = 1 + extra;
        assigned += counts[i];
    }
    counts[0] += population_size - assigned;
    return counts;
}

FeatureRelationship make_relationship(const Individual& seed, const FeatureMatrix& matrix) {
    FeatureRelationship fr;
    fr.target = seed.score.target;
    fr.target_name = matrix.names[fr.target];
    fr.tree = seed.tree;
    fr.infix = render(seed.tree, matrix.names, RenderFormat::Infix);
    fr.cost = seed.score.cost;
    fr.raw_r = seed.score.raw_r;
    fr.fitness = seed.score.fitness;
    fr.size = seed.score.size;
    fr.features_used = features_used(seed.tree);
    for (int f : fr.features_used) fr.feature_names_used.push_back(matrix.names[f]);
    return fr;
}

}  // namespace

void evaluate_population(std::vector<Individual>& population, const FeatureMatrix& matrix,
                         const MatchSets& match_sets, double alpha) {
    CorrelationScorer scorer(matrix);
    TreeEvaluator evaluator(matrix);
    for (auto& ind : population)
        evaluate_individual(ind, evaluator, scorer, match_sets, alpha);
}

RunResult run(const GpConfig& raw_config, const FeatureMatrix& matrix,
              const MatchSets& match_sets) {
    const GpConfig config = raw_config.normalized();
    config.validate();
    if (matrix.m < 2) throw DataError("run: need at least 2 features");

    const auto start = std::chrono::steady_clock::now();
    const int m = static_cast<int>(matrix.m);

    RunResult result;
    result.config = config;
    result.rng_seed = config.rng_seed;

    CorrelationScorer scorer(matrix);
    TreeEvaluator evaluator(matrix);

    std::uint64_t next_id = 0;
    auto wrap = [&](std::vector<ExprTree>&& trees) {
        std::vector<Individual> population;
        population.reserve(trees.size());
        for (auto& tree : trees) {
            Individual ind;
            ind.tree = std::move(tree);
            ind.id = next_id++;
            population.push_back(std::move(ind));
        }
        return population;
    };

    Rng init_rng(splitmix64(config.rng_seed));
    auto population = wrap(init_population(config, m, init_rng));

    auto evaluate_all = [&](std::vector<Individual>& pop) {
        for (auto& ind : pop)
            evaluate_individual(ind, evaluator, scorer, match_sets, config.alpha);
    };

    for (int gen = 1; gen <= config.generations; ++gen) {
        evaluate_all(population);
        auto species = speciate(population, config.n_species);

        std::vector<double> fitnesses, sizes;
        fitnesses.reserve(population.size());
        sizes.reserve(population.size());
        for (const auto& ind : population) {
            fitnesses.push_back(ind.score.fitness);
            sizes.push_back(static_cast<double>(ind.score.size));
        }
        ConvergenceRecord record;
        record.generation = gen;
        record.median_fitness = median(std::move(fitnesses));
        record.median_size = median(std::move(sizes));
        record.best_fitness = species.front().seed->score.fitness;
        record.species_count = static_cast<int>(species.size());
        result.convergence.push_back(record);

        std::vector<std::pair<int, double>> best;
        for (const auto& sp : species) best.emplace_back(sp.key, sp.seed->score.fitness);
        std::sort(best.begin(), best.end());
        result.species_best.push_back(std::move(best));

        const auto counts = offspring_counts(species, config.population_size, config.n_species);
        std::vector<ExprTree> next;
        next.reserve(config.population_size);
        for (std::size_t si = 0; si < species.size(); ++si) {
            Rng species_rng(substream_seed(config.rng_seed, gen, species[si].key));
            auto offspring = breed_species(species[si], counts[si], config, m, species_rng);
            for (auto& tree : offspring) next.push_back(std::move(tree));
        }
        population = wrap(std::move(next));
    }

    evaluate_all(population);
    const auto species = speciate(population, config.n_species);
    for (const auto& sp : species) {
        auto fr = make_relationship(*sp.seed, matrix);
        if (fr.fitness >= 1.0)
            result.degenerate.push_back(std::move(fr));
        else
            result.relationships.push_back(std::move(fr));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RunResult run(const GpConfig& config, const FeatureMatrix& matrix) {
    return run(config, matrix, matching_sets(correlation_matrix(matrix)));
}

std::vector<RunResult> run_batch(const GpConfig& config, const FeatureMatrix& matrix,
                                 const MatchSets& match_sets, int n_runs, int jobs) {
    if (n_runs < 1) throw ConfigError("run_batch: n_runs must be >= 1");
    std::vector<RunResult> results(n_runs);
    const int workers = std::max(1, std::min(jobs, n_runs));
    if (workers == 1) {
        for (int k = 0; k < n_runs; ++k) {
            GpConfig cfg = config;
            cfg.rng_seed = config.rng_seed + static_cast<std::uint64_t>(k);
            results[k] = run(cfg, matrix, match_sets);
        }
        return results;
    }

    std::atomic<int> counter{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (int k = counter.fetch_add(1); k < n_runs; k = counter.fetch_add(1)) {
                GpConfig cfg = config;
                cfg.rng_seed = config.rng_seed + static_cast<std::uint64_t>(k);
                results[k] = run(cfg, matrix, match_sets);
            }
        });
    }
    for (auto& t : threads) t.join();
    return results;
}

}  // namespace gpfrm
