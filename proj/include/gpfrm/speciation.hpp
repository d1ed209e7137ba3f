#pragma once

#include <vector>

#include "gpfrm/genetics.hpp"

namespace gpfrm {

/// A niche keyed by target feature index. The seed is the best (lowest
/// fitness) member; members point into the population passed to speciate.
struct Species {
    int key = -1;
    const Individual* seed = nullptr;
    std::vector<const Individual*> members;
};

/// Partition an evaluated population into at most n_species species, in
/// fitness order (ties by id): join the species keyed by CF_0 if it exists,
/// else create one while capacity remains, else walk the CF list to the
/// first existing key. Species are returned in creation order, so the first
/// species' seed is the population best.
std::vector<Species> speciate(const std::vector<Individual>& population, int n_species);

}  // namespace gpfrm
