#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpfrm/artifacts.hpp"
#include "helpers.hpp"

using namespace gpfrm;
namespace fs = std::filesystem;

TEST_CASE("format_double round-trips exactly") {
    Rng rng(81);
    std::uniform_real_distribution<double> uniform(-1e6, 1e6);
    for (int trial = 0; trial < 1000; ++trial) {
        const double v = uniform(rng) * std::pow(10.0, rng() % 13 ? 0 : -9);
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.01) == "0.01");
    CHECK(format_double(0.0001) == "0.0001");
}

TEST_CASE("relationships json round-trips") {
    Rng rng(82);
    const auto matrix = gpfrm::testing::random_matrix(60, 5, rng);
    GpConfig config;
    config.population_size = 50;
    config.generations = 10;
    config.n_species = 5;
    config.alpha = 0.01;
    config.rng_seed = 12;
    const auto result = run(config, matrix);

    const auto text = relationships_to_json(result, "toy", matrix.names);
    const auto parsed = relationships_from_json(text, matrix.names);
    CHECK(parsed.dataset == "toy");
    CHECK(parsed.alpha == config.alpha);
    CHECK(parsed.seed == config.rng_seed);
    REQUIRE(parsed.relationships.size() == result.relationships.size());
    REQUIRE(parsed.degenerate.size() == result.degenerate.size());
    for (std::size_t i = 0; i < parsed.relationships.size(); ++i) {
        const auto& a = result.relationships[i];
        const auto& b = parsed.relationships[i];
        CHECK(a.target == b.target);
        CHECK(a.cost == b.cost);
        CHECK(a.fitness == b.fitness);
        CHECK(a.infix == b.infix);
        CHECK(a.features_used == b.features_used);
        // the rebuilt tree evaluates identically
        CHECK(evaluate(a.tree, matrix).values == evaluate(b.tree, matrix).values);
    }
}

TEST_CASE("convergence csv round-trips") {
    std::vector<ConvergenceRecord> records = {
        {1, 0.51234567890123, 7.5, 0.4, 9},
        {2, 0.4, 8.0, 0.3999999999999999, 10},
    };
    const auto parsed = convergence_from_csv(convergence_to_csv(records));
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].generation == 1);
    CHECK(parsed[0].median_fitness == records[0].median_fitness);
    CHECK(parsed[1].best_fitness == records[1].best_fitness);
    CHECK(parsed[1].species_count == 10);
}

TEST_CASE("aggregate csv round-trips") {
    AggregateRow row;
    row.dataset = "wine";
    row.alpha = 0.001;
    row.n_runs = 30;
    row.mean_fitness = 0.195;
    row.mean_cost = 0.172;
    row.mean_nodes = 22.7;
    row.rsd_fitness = 37.0;
    row.rsd_cost = 40.0;
    row.rsd_nodes = 31.3;
    const auto parsed = aggregate_from_csv(aggregate_to_csv({row}));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].dataset == "wine");
    CHECK(parsed[0].alpha == row.alpha);
    CHECK(parsed[0].mean_cost == row.mean_cost);
    CHECK(parsed[0].rsd_nodes == row.rsd_nodes);
}

TEST_CASE("write_run_artifacts lays out the run directory") {
    Rng rng(83);
    const auto matrix = gpfrm::testing::random_matrix(40, 4, rng);
    GpConfig config;
    config.population_size = 40;
    config.generations = 5;
    config.n_species = 4;
    config.alpha = 0.01;
    config.rng_seed = 4;
    const auto result = run(config, matrix);

    const fs::path out = fs::temp_directory_path() / "gpfrm_artifacts_test";
    fs::remove_all(out);
    const auto dir = run_directory(out, "toy", config.alpha, 0);
    CHECK(dir == out / "toy" / "0.01" / "run_0");
    write_run_artifacts(dir, result, "toy", "toy.csv", matrix.names);
    CHECK(fs::exists(dir / "relationships.json"));
    CHECK(fs::exists(dir / "convergence.csv"));
    CHECK(fs::exists(dir / "meta.json"));

    std::stringstream buffer;
    buffer << std::ifstream(dir / "relationships.json").rdbuf();
    const auto parsed = relationships_from_json(buffer.str(), matrix.names);
    CHECK(parsed.relationships.size() == result.relationships.size());
    fs::remove_all(out);
}

TEST_CASE("run_batch_to_dir writes runs and one aggregate row per alpha") {
    Rng rng(84);
    const auto matrix = gpfrm::testing::random_matrix(40, 4, rng);
    const auto match_sets = matching_sets(correlation_matrix(matrix));
    GpConfig config;
    config.population_size = 40;
    config.generations = 5;
    config.n_species = 4;
    config.rng_seed = 6;

    const fs::path out = fs::temp_directory_path() / "gpfrm_batch_test";
    fs::remove_all(out);
    BatchOptions options;
    options.out_dir = out;
    options.dataset = "toy";
    options.data_path = "toy.csv";
    options.alphas = {0.01, 0.001};
    options.runs = 2;

    const auto rows = run_batch_to_dir(config, matrix, match_sets, options);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].alpha == 0.01);
    CHECK(rows[1].alpha == 0.001);
    CHECK(fs::exists(out / "toy" / "0.01" / "run_0" / "relationships.json"));
    CHECK(fs::exists(out / "toy" / "0.001" / "run_1" / "convergence.csv"));
    CHECK(fs::exists(out / "toy" / "aggregate.csv"));

    std::stringstream buffer;
    buffer << std::ifstream(out / "toy" / "aggregate.csv").rdbuf();
    const auto parsed = aggregate_from_csv(buffer.str());
    CHECK(parsed.size() == 2);
    fs::remove_all(out);
}
