#include "brkga/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

namespace brkga {

bool better_than(const Fitness& a, const Fitness& b, std::size_t component) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("better_than: mismatched dimensions");
    if (component >= a.values.size() || component >= b.values.size())
        throw std::invalid_argument("better_than: component out of range");
    if (a.senses.at(component) != b.senses.at(component))
        throw std::invalid_argument("better_than: mismatched senses");
    if (a.senses[component] == Sense::MINIMIZE)
        return a.values[component] < b.values[component];
    return a.values[component] > b.values[component];
}

void Decoder::improve(std::span<double>, Fitness&) const {
    // Intentionally empty: the slot exists for problem-specific local search.
}

void BrkgaConfig::validate() const {
    if (n < 1)
        throw std::invalid_argument("BrkgaConfig: n must be at least 1");
    if (p < 1)
        throw std::invalid_argument("BrkgaConfig: p must be at least 1");
    if (p_e < 1)
        throw std::invalid_argument("BrkgaConfig: p_e must be at least 1");
    if (2 * p_e >= p)
        throw std::invalid_argument("BrkgaConfig: p_e must be smaller than p/2");
    if (p_m < 1)
        throw std::invalid_argument("BrkgaConfig: p_m must be at least 1");
    if (p_e + p_m >= p)
        throw std::invalid_argument("BrkgaConfig: p_e + p_m must be smaller than p");
    if (!(rho > 0.5) || !(rho <= 1.0))
        throw std::invalid_argument("BrkgaConfig: rho must satisfy 0.5 < rho <= 1");
    if (pi_e < 1)
        throw std::invalid_argument("BrkgaConfig: pi_e must be at least 1");
    if (pi_e >= pi_t)
        throw std::invalid_argument("BrkgaConfig: pi_e must be smaller than pi_t");
    if (pi_t > p)
        throw std::invalid_argument("BrkgaConfig: pi_t must not exceed p");
    if (pi_e > p_e)
        throw std::invalid_argument("BrkgaConfig: pi_e must not exceed p_e");
    if (second_parent_pool == ParentPool::NON_ELITE && pi_t - pi_e > p - p_e)
        throw std::invalid_argument(
            "BrkgaConfig: pi_t - pi_e non-elite parents exceed the non-elite set");
    if (islands < 1)
        throw std::invalid_argument("BrkgaConfig: islands must be at least 1");
    if (migration_count > p_e)
        throw std::invalid_argument("BrkgaConfig: migration_count must not exceed p_e");
    if (self_adaptive && pi_t != 2)
        throw std::invalid_argument(
            "BrkgaConfig: self-adaptive bias requires the two-parent scheme (pi_t == 2)");
}

const Individual& Population::best() const {
    if (members.empty())
        throw std::invalid_argument("Population::best: population is empty");
    return members.front();
}

Chromosome new_random_chromosome(std::size_t length, RngStream& rng) {
    Chromosome keys(length);
    for (double& key : keys)
        key = rng.next_unit();
    return keys;
}

void validate_keys(const Chromosome& keys) {
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (!(keys[i] >= 0.0) || !(keys[i] < 1.0))
            throw std::invalid_argument("chromosome key at position " + std::to_string(i) +
                                        " lies outside [0, 1)");
}

void decode_individual(Individual& member, const Decoder& decoder, std::size_t n) {
    if (member.keys.size() < n)
        throw std::invalid_argument("decode_individual: chromosome shorter than n");
    Fitness fit = decoder.decode(std::span<const double>(member.keys.data(), n));
    if (fit.values.size() != decoder.num_objectives() ||
        fit.senses.size() != fit.values.size())
        throw std::invalid_argument(
            "decode_individual: decoder emitted a fitness of undeclared dimension");
    for (double v : fit.values)
        if (!std::isfinite(v))
            throw std::runtime_error("decode_individual: decoder emitted a non-finite value");
    member.fitness = std::move(fit);
}

void sort_members(Population& pop, std::size_t component) {
    for (const Individual& member : pop.members)
        if (!member.decoded())
            throw std::invalid_argument("sort_members: undecoded member");
    std::stable_sort(pop.members.begin(), pop.members.end(),
                     [component](const Individual& a, const Individual& b) {
                         return better_than(*a.fitness, *b.fitness, component);
                     });
}

std::pair<std::span<const Individual>, std::span<const Individual>>
partition(const Population& pop) {
    if (pop.elite_size < 1 || pop.elite_size >= pop.members.size())
        throw std::invalid_argument("partition: elite size must satisfy 1 <= p_e < p");
    std::span<const Individual> all(pop.members.data(), pop.members.size());
    return {all.first(pop.elite_size), all.subspan(pop.elite_size)};
}

Population init_population(const BrkgaConfig& config,
                           const Decoder& decoder,
                           const std::vector<Chromosome>& warm_starts,
                           RngStream& rng,
                           std::size_t objective) {
    config.validate();
    if (warm_starts.size() > config.p)
        throw std::invalid_argument("init_population: more warm starts than p");

    Population pop;
    pop.elite_size = config.p_e;
    pop.mutant_size = config.p_m;
    pop.members.reserve(config.p);

    for (const Chromosome& start : warm_starts) {
        if (start.size() != config.n)
            throw std::invalid_argument("init_population: warm start length differs from n");
        validate_keys(start);
        Individual member{start, std::nullopt};
        if (config.self_adaptive) {
            member.keys.push_back(rng.next_unit());
            member.keys.push_back(rng.next_unit());
        }
        pop.members.push_back(std::move(member));
    }
    while (pop.members.size() < config.p)
        pop.members.push_back({new_random_chromosome(config.chromosome_length(), rng),
                               std::nullopt});

    for (Individual& member : pop.members)
        decode_individual(member, decoder, config.n);
    sort_members(pop, objective);
    return pop;
}

std::string format_sig9(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

std::vector<std::size_t> ascending_order(std::span<const double> keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [keys](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return order;
}

} // namespace brkga
