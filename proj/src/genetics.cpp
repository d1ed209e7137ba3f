#include "gpfrm/genetics.hpp"

#include <algorithm>
#include <cmath>

#include "gpfrm/speciation.hpp"

namespace gpfrm {

GpConfig GpConfig::normalized() const {
    GpConfig out = *this;
    if (out.n_species > 0 && out.population_size % out.n_species != 0)
        out.population_size += out.n_species - out.population_size % out.n_species;
    return out;
}

void GpConfig::validate() const {
    if (population_size < 1) throw ConfigError("population_size must be >= 1");
    if (generations < 0) throw ConfigError("generations must be >= 0");
    if (std::fabs(crossover_rate + mutation_rate - 1.0) > 1e-9)
        throw ConfigError("crossover_rate + mutation_rate must equal 1");
    if (crossover_rate < 0.0 || mutation_rate < 0.0)
        throw ConfigError("operator rates must be non-negative");
    if (max_depth < 2) throw ConfigError("max_depth must be >= 2");
    if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
    if (n_species < 1) throw ConfigError("n_species must be >= 1");
    if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
    if (feature_terminal_prob < 0.0 || feature_terminal_prob > 1.0)
        throw ConfigError("feature_terminal_prob must be in [0,1]");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

namespace {

constexpr OpKind kOps[] = {OpKind::Add, OpKind::Sub, OpKind::Mul,
                           OpKind::Div, OpKind::Max, OpKind::Min};

OpKind random_op(Rng& rng) {
    return kOps[std::uniform_int_distribution<int>(0, 5)(rng)];
}

std::unique_ptr<Node> random_terminal(int feature_count, double feature_prob, Rng& rng) {
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < feature_prob)
        return Node::make_feature(std::uniform_int_distribution<int>(0, feature_count - 1)(rng));
    return Node::make_constant(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

std::unique_ptr<Node> grow_node(int budget, int feature_count, double feature_prob, Rng& rng) {
    if (budget <= 1 || std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5)
        return random_terminal(feature_count, feature_prob, rng);
    return Node::make_op(random_op(rng),
                         grow_node(budget - 1, feature_count, feature_prob, rng),
                         grow_node(budget - 1, feature_count, feature_prob, rng));
}

std::unique_ptr<Node> full_node(int target_depth, int feature_count, double feature_prob,
                                Rng& rng) {
    if (target_depth <= 1) return random_terminal(feature_count, feature_prob, rng);
    return Node::make_op(random_op(rng),
                         full_node(target_depth - 1, feature_count, feature_prob, rng),
                         full_node(target_depth - 1, feature_count, feature_prob, rng));
}

struct NodeSlot {
    std::unique_ptr<Node>* slot;
    int depth;  // root = 1
};

void collect_slots(std::unique_ptr<Node>& slot, int depth, std::vector<NodeSlot>& out) {
    out.push_back({&slot, depth});
    if (slot->type == Node::Type::Op) {
        collect_slots(slot->left, depth + 1, out);
        collect_slots(slot->right, depth + 1, out);
    }
}

void collect_const_slots(const Node& node, std::vector<const Node*>& out) {
    out.push_back(&node);
    if (node.type == Node::Type::Op) {
        collect_const_slots(*node.left, out);
        collect_const_slots(*node.right, out);
    }
}

}  // namespace

ExprTree grow_tree(int depth_budget, int feature_count, double feature_prob, Rng& rng) {
    return ExprTree(grow_node(depth_budget, feature_count, feature_prob, rng));
}

ExprTree full_tree(int target_depth, int feature_count, double feature_prob, Rng& rng) {
    return ExprTree(full_node(target_depth, feature_count, feature_prob, rng));
}

std::vector<ExprTree> init_population(const GpConfig& config, int feature_count, Rng& rng) {
    std::vector<ExprTree> trees;
    trees.reserve(config.population_size);
    const int ramp_levels = std::max(1, config.max_depth - 1);  // depths 2..max_depth
    for (int i = 0; i < config.population_size; ++i) {
        const int depth = 2 + (i / 2) % ramp_levels;
        if (i % 2 == 0)
            trees.push_back(full_tree(depth, feature_count, config.feature_terminal_prob, rng));
        else
            trees.push_back(grow_tree(depth, feature_count, config.feature_terminal_prob, rng));
    }
    return trees;
}

ExprTree subtree_crossover(const ExprTree& a, const ExprTree& b, int max_depth, Rng& rng) {
    std::vector<const Node*> donors;
    collect_const_slots(*b.root, donors);

    for (int attempt = 0; attempt < 10; ++attempt) {
        ExprTree child = a;
        std::vector<NodeSlot> slots;
        collect_slots(child.root, 1, slots);
        const auto& target = slots[std::uniform_int_distribution<std::size_t>(
            0, slots.size() - 1)(rng)];
        const Node* donor = donors[std::uniform_int_distribution<std::size_t>(
            0, donors.size() - 1)(rng)];
        *target.slot = donor->clone();
        if (depth(child) <= max_depth) return child;
    }
    return a;
}

ExprTree subtree_mutation(const ExprTree& a, int max_depth, int feature_count,
                          double feature_prob, Rng& rng) {
    ExprTree child = a;
    std::vector<NodeSlot> slots;
    collect_slots(child.root, 1, slots);
    const auto& target = slots[std::uniform_int_distribution<std::size_t>(
        0, slots.size() - 1)(rng)];
    if ((*target.slot)->type == Node::Type::Constant) {
        // Constant terminals are redrawn rather than replaced by a subtree.
        (*target.slot)->value = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return child;
    }
    const int budget = max_depth - target.depth + 1;
    *target.slot = grow_node(budget, feature_count, feature_prob, rng);
    return child;
}

const Individual& tournament_select(const std::vector<const Individual*>& members,
                                    int k, Rng& rng) {
    if (members.empty()) throw std::invalid_argument("tournament_select: empty member list");
    const int draws = static_cast<int>(std::min<std::size_t>(k, members.size()));
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    const Individual* best = members[pick(rng)];
    for (int i = 1; i < draws; ++i) {
        const Individual* candidate = members[pick(rng)];
        if (candidate->score.fitness < best->score.fitness ||
            (candidate->score.fitness == best->score.fitness && candidate->id < best->id))
            best = candidate;
    }
    return *best;
}

std::vector<ExprTree> breed_species(const Species& species, int offspring_count,
                                    const GpConfig& config, int feature_count, Rng& rng) {
    if (offspring_count < 1)
        throw std::invalid_argument("breed_species: offspring_count must be >= 1");
    std::vector<ExprTree> offspring;
    offspring.reserve(offspring_count);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < offspring_count - 1; ++i) {
        if (coin(rng) < config.crossover_rate) {
            const Individual& p1 = tournament_select(species.members, config.tournament_size, rng);
            const Individual& p2 = tournament_select(species.members, config.tournament_size, rng);
            offspring.push_back(subtree_crossover(p1.tree, p2.tree, config.max_depth, rng));
        } else {
            const Individual& p = tournament_select(species.members, config.tournament_size, rng);
            offspring.push_back(subtree_mutation(p.tree, config.max_depth, feature_count,
                                                 config.feature_terminal_prob, rng));
        }
    }
    offspring.push_back(species.seed->tree);  // elitism
    return offspring;
}

}  // namespace gpfrm
