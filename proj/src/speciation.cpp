#include "gpfrm/speciation.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace gpfrm {

std::vector<Species> speciate(const std::vector<Individual>& population, int n_species) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ia = population[a];
        const auto& ib = population[b];
        if (ia.score.fitness != ib.score.fitness)
            return ia.score.fitness < ib.score.fitness;
        return ia.id < ib.id;
    });

    std::vector<Species> species;
    std::unordered_map<int, std::size_t> by_key;
    for (std::size_t idx : order) {
        const Individual& ind = population[idx];
        int key = ind.cf[0];
        auto it = by_key.find(key);
        if (it != by_key.end()) {
            species[it->second].members.push_back(&ind);
        } else if (static_cast<int>(species.size()) < n_species) {
            Species sp;
            sp.key = key;
            sp.seed = &ind;
            sp.members.push_back(&ind);
            by_key.emplace(key, species.size());
            species.push_back(std::move(sp));
        } else {
            // CF is a permutation of all features and every key is a feature
            // index, so this walk terminates.
            std::size_t k = 1;
            while ((it = by_key.find(ind.cf[k])) == by_key.end()) ++k;
            species[it->second].members.push_back(&ind);
        }
    }
    return species;
}

}  // namespace gpfrm
