#include "brkga/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brkga {

double mean_abs_distance(const Chromosome& a, const Chromosome& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("mean_abs_distance: chromosome lengths differ");
    if (a.empty())
        return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        total += std::abs(a[i] - b[i]);
    return total / static_cast<double>(a.size());
}

bool StallCounter::observe(const Fitness& candidate) {
    if (!best_ || better_than(candidate, *best_, component_)) {
        best_ = candidate;
        count_ = 0;
        return true;
    }
    ++count_;
    return false;
}

void StallCounter::clear() {
    count_ = 0;
    best_.reset();
}

void reset_population(Population& pop,
                      const BrkgaConfig& config,
                      const Decoder& decoder,
                      RngStream& rng) {
    const std::size_t length = config.chromosome_length();
    for (Individual& member : pop.members) {
        member.keys = new_random_chromosome(length, rng);
        member.fitness.reset();
    }
    for (Individual& member : pop.members)
        decode_individual(member, decoder, config.n);
    sort_members(pop);
}

void shake(Population& pop,
           double beta,
           const BrkgaConfig& config,
           const Decoder& decoder,
           RngStream& rng) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("shake: beta must lie in [0, 1]");
    if (pop.elite_size >= pop.members.size())
        throw std::invalid_argument("shake: elite size must be smaller than the population");

    for (std::size_t rank = 0; rank < pop.elite_size; ++rank) {
        Chromosome& keys = pop.members[rank].keys;
        const std::size_t length = keys.size();
        const auto moves =
            static_cast<std::size_t>(std::ceil(beta * static_cast<double>(length)));
        for (std::size_t m = 0; m < moves; ++m) {
            if (rng.next_bool(0.5)) {
                keys[rng.next_index(length)] = rng.next_unit();
            } else if (length >= 2) {
                const std::size_t i = rng.next_index(length);
                std::size_t j = rng.next_index(length - 1);
                if (j >= i)
                    ++j;
                std::swap(keys[i], keys[j]);
            }
        }
        pop.members[rank].fitness.reset();
    }
    const std::size_t length = config.chromosome_length();
    for (std::size_t rank = pop.elite_size; rank < pop.members.size(); ++rank) {
        pop.members[rank].keys = new_random_chromosome(length, rng);
        pop.members[rank].fitness.reset();
    }
    for (Individual& member : pop.members)
        decode_individual(member, decoder, config.n);
    sort_members(pop);
}

void migrate(std::vector<Population>& islands, std::size_t count, std::size_t objective) {
    const std::size_t k = islands.size();
    if (k < 2 || count == 0)
        return;
    for (const Population& island : islands) {
        if (count > island.elite_size)
            throw std::invalid_argument("migrate: count exceeds an island's elite size");
        if (count >= island.members.size())
            throw std::invalid_argument("migrate: count must be smaller than island size");
    }

    // Snapshot the emigrants first so all exchanges happen simultaneously.
    std::vector<std::vector<Individual>> emigrants(k);
    for (std::size_t i = 0; i < k; ++i)
        emigrants[i].assign(islands[i].members.begin(), islands[i].members.begin() + count);

    for (std::size_t i = 0; i < k; ++i) {
        Population& target = islands[(i + 1) % k];
        const std::size_t p = target.members.size();
        for (std::size_t c = 0; c < count; ++c)
            target.members[p - count + c] = emigrants[i][c];
        sort_members(target, objective);
    }
}

std::vector<std::size_t> elite_diversity_filter(const std::vector<Individual>& sorted_members,
                                                std::size_t target,
                                                double min_dist,
                                                const DistanceFn& metric) {
    if (target < 1 || target > sorted_members.size())
        throw std::invalid_argument("elite_diversity_filter: target out of range");
    if (!metric)
        throw std::invalid_argument("elite_diversity_filter: metric is empty");
    for (const Individual& member : sorted_members)
        if (!member.decoded())
            throw std::invalid_argument("elite_diversity_filter: undecoded member");

    std::vector<std::size_t> selected;
    std::vector<std::size_t> skipped;
    selected.reserve(target);
    for (std::size_t rank = 0; rank < sorted_members.size() && selected.size() < target;
         ++rank) {
        bool distinct = true;
        for (std::size_t held : selected) {
            if (metric(sorted_members[held].keys, sorted_members[rank].keys) < min_dist) {
                distinct = false;
                break;
            }
        }
        if (distinct)
            selected.push_back(rank);
        else
            skipped.push_back(rank);
    }
    // Shortfall: fill with the best skipped ranks.
    for (std::size_t i = 0; selected.size() < target; ++i)
        selected.push_back(skipped[i]);
    std::sort(selected.begin(), selected.end());
    return selected;
}

double population_diversity(const Population& pop) {
    const std::size_t p = pop.members.size();
    if (p < 2)
        throw std::invalid_argument("population_diversity: need at least two members");
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            total += mean_abs_distance(pop.members[i].keys, pop.members[j].keys);
            ++pairs;
        }
    return total / static_cast<double>(pairs);
}

} // namespace brkga
