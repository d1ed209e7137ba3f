#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "gpfrm/genetics.hpp"
#include "gpfrm/speciation.hpp"
#include "helpers.hpp"

using namespace gpfrm;

namespace {

bool trees_equal(const Node& a, const Node& b) {
    if (a.type != b.type) return false;
    switch (a.type) {
        case Node::Type::Feature: return a.feature == b.feature;
        case Node::Type::Constant: return a.value == b.value;
        case Node::Type::Op:
            return a.op == b.op && trees_equal(*a.left, *b.left) &&
                   trees_equal(*a.right, *b.right);
    }
    return false;
}

bool all_leaves_at_depth(const Node& n, int want, int at = 1) {
    if (n.type != Node::Type::Op) return at == want;
    return all_leaves_at_depth(*n.left, want, at + 1) &&
           all_leaves_at_depth(*n.right, want, at + 1);
}

bool features_in_range(const ExprTree& tree, int m) {
    for (int f : features_used(tree))
        if (f < 0 || f >= m) return false;
    return true;
}

Individual make_individual(double fitness, std::uint64_t id, int target = 0) {
    Individual ind;
    ind.tree = ExprTree(Node::make_constant(0.5));
    ind.score.fitness = fitness;
    ind.score.target = target;
    ind.cf = {target};
    ind.id = id;
    return ind;
}

}  // namespace

TEST_CASE("config normalization rounds the population up") {
    GpConfig config;
    config.population_size = 95;
    config.n_species = 10;
    CHECK(config.normalized().population_size == 100);
    config.population_size = 100;
    CHECK(config.normalized().population_size == 100);
}

TEST_CASE("config validation") {
    GpConfig config;
    config.crossover_rate = 0.7;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.crossover_rate = 0.8;
    CHECK_NOTHROW(config.validate());
    config.max_depth = 1;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("init_population respects bounds and is seed-deterministic") {
    GpConfig config;
    config.population_size = 4;
    config.max_depth = 2;
    Rng rng_a(99), rng_b(99);
    const auto pop_a = init_population(config, 3, rng_a);
    const auto pop_b = init_population(config, 3, rng_b);
    REQUIRE(pop_a.size() == 4);
    for (std::size_t i = 0; i < pop_a.size(); ++i) {
        CHECK(depth(pop_a[i]) <= 2);
        CHECK(features_in_range(pop_a[i], 3));
        CHECK(trees_equal(*pop_a[i].root, *pop_b[i].root));
    }
}

TEST_CASE("full trees have every leaf at the target depth") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto tree = full_tree(3, 4, 0.9, rng);
        CHECK(size(tree) == 7);
        CHECK(all_leaves_at_depth(*tree.root, 3));
    }
}

TEST_CASE("ramped half-and-half covers depths 2..max_depth") {
    GpConfig config;
    config.population_size = 100;
    config.max_depth = 6;
    Rng rng(2);
    const auto pop = init_population(config, 5, rng);
    std::map<int, int> full_depths;
    for (std::size_t i = 0; i < pop.size(); i += 2) ++full_depths[depth(pop[i])];  // full half
    for (int d = 2; d <= 6; ++d) CHECK(full_depths[d] > 0);
    for (const auto& tree : pop) CHECK(depth(tree) <= 6);
}

TEST_CASE("crossover of single-node parents yields one of them") {
    Rng rng(3);
    ExprTree a(Node::make_feature(0));
    ExprTree b(Node::make_feature(1));
    for (int trial = 0; trial < 20; ++trial) {
        const auto child = subtree_crossover(a, b, 6, rng);
        REQUIRE(child.root->type == Node::Type::Feature);
        CHECK((child.root->feature == 0 || child.root->feature == 1));
    }
}

TEST_CASE("crossover returns the first parent after exhausting retries") {
    Rng rng(4);
    // a full depth-4 parent against a depth-2 limit: only a shallow donor
    // spliced at the root can satisfy the limit, so most trials exhaust the
    // 10 retries and must hand back `a` unchanged
    const auto a = full_tree(4, 3, 0.9, rng);
    const auto b = full_tree(6, 3, 0.9, rng);
    int fallbacks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto child = subtree_crossover(a, b, 2, rng);
        const bool ok_child = depth(child) <= 2;
        const bool unchanged = trees_equal(*child.root, *a.root);
        CHECK((ok_child || unchanged));
        if (unchanged) ++fallbacks;
    }
    CHECK(fallbacks > 0);
}

TEST_CASE("crossover respects max depth over many random pairs") {
    Rng rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = gpfrm::testing::random_tree(6, 4, rng);
        const auto b = gpfrm::testing::random_tree(6, 4, rng);
        const auto child = subtree_crossover(a, b, 6, rng);
        CHECK(depth(child) <= 6);
        CHECK(features_in_range(child, 4));
    }
}

TEST_CASE("mutating a constant redraws it in U[0,1]") {
    Rng rng(6);
    ExprTree tree(Node::make_constant(0.71));
    for (int trial = 0; trial < 50; ++trial) {
        const auto child = subtree_mutation(tree, 6, 3, 0.9, rng);
        REQUIRE(child.root->type == Node::Type::Constant);
        CHECK(child.root->value >= 0.0);
        CHECK(child.root->value <= 1.0);
    }
}

TEST_CASE("mutation respects max depth over many random trees") {
    Rng rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = gpfrm::testing::random_tree(6, 4, rng);
        const auto child = subtree_mutation(a, 6, 4, 0.9, rng);
        CHECK(depth(child) <= 6);
        CHECK(features_in_range(child, 4));
    }
}

TEST_CASE("mutating a single-node tree stays within bounds") {
    Rng rng(8);
    ExprTree a(Node::make_feature(0));
    for (int trial = 0; trial < 100; ++trial) {
        const auto child = subtree_mutation(a, 6, 4, 0.9, rng);
        CHECK(depth(child) <= 6);
    }
}

TEST_CASE("tournament selection") {
    Rng rng(9);
    auto i1 = make_individual(0.1, 1);
    auto i2 = make_individual(0.9, 2);

    SUBCASE("singleton") {
        std::vector<const Individual*> members{&i1};
        CHECK(&tournament_select(members, 7, rng) == &i1);
    }

    SUBCASE("empty list throws") {
        std::vector<const Individual*> members;
        CHECK_THROWS(tournament_select(members, 7, rng));
    }

    SUBCASE("better individual wins a full tournament") {
        std::vector<const Individual*> members{&i1, &i2};
        // k=2 with both sampled picks the 0.1 individual; over many draws the
        // better one must dominate
        int wins = 0;
        for (int trial = 0; trial < 1000; ++trial)
            if (&tournament_select(members, 2, rng) == &i1) ++wins;
        CHECK(wins > 700);
    }

    SUBCASE("selection pressure matches analytic tournament probabilities") {
        auto i3 = make_individual(0.5, 3);
        std::vector<const Individual*> members{&i1, &i3, &i2};
        std::map<const Individual*, int> counts;
        const int draws = 10000;
        for (int trial = 0; trial < draws; ++trial)
            ++counts[&tournament_select(members, 7, rng)];
        // draws are capped at the pool size, so 3 here:
        // P(best) = 1 - (2/3)^3 ~= 0.704, P(mid) = (2/3)^3 - (1/3)^3 ~= 0.259
        CHECK(counts[&i1] > counts[&i3]);
        CHECK(counts[&i3] > counts[&i2]);
        CHECK(std::fabs(counts[&i1] / double(draws) - 0.7037) < 0.02);
        CHECK(std::fabs(counts[&i3] / double(draws) - 0.2593) < 0.02);
    }
}

TEST_CASE("breed_species appends the seed unmodified and hits the count") {
    Rng rng(10);
    GpConfig config;
    config.max_depth = 6;

    Individual seed = make_individual(0.1, 1);
    seed.tree = ExprTree(Node::make_op(OpKind::Mul, Node::make_feature(0), Node::make_feature(1)));
    Species species;
    species.key = 0;
    species.seed = &seed;
    species.members = {&seed};

    const auto offspring = breed_species(species, 3, config, 2, rng);
    REQUIRE(offspring.size() == 3);
    CHECK(trees_equal(*offspring.back().root, *seed.tree.root));
    for (const auto& tree : offspring) {
        CHECK(depth(tree) <= 6);
        CHECK(features_in_range(tree, 2));
    }
    CHECK_THROWS(breed_species(species, 0, config, 2, rng));
}
