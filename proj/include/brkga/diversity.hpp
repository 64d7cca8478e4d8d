#ifndef BRKGA_DIVERSITY_HPP_
#define BRKGA_DIVERSITY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "brkga/core.hpp"

namespace brkga {

/// Distance between two chromosomes in key space.
using DistanceFn = std::function<double(const Chromosome&, const Chromosome&)>;

/// Mean absolute difference of paired keys; the default chromosome metric.
double mean_abs_distance(const Chromosome& a, const Chromosome& b);

/**
 * Tracks generations without strict improvement of the incumbent best.
 * observe() returns true and clears the counter exactly when the candidate
 * strictly beats the best fitness seen so far; any other observation
 * increments the counter. clear() forgets both the counter and the
 * incumbent reference (used after a population reset, once the old
 * incumbent has been archived by the caller).
 */
class StallCounter {
public:
    explicit StallCounter(std::size_t component = 0) : component_(component) {}

    bool observe(const Fitness& candidate);
    std::uint64_t count() const { return count_; }
    const std::optional<Fitness>& best() const { return best_; }
    void clear();

private:
    std::size_t component_;
    std::uint64_t count_ = 0;
    std::optional<Fitness> best_;
};

/// Replaces every member with a fresh random chromosome, decodes and sorts.
/// The population size and elite/mutant split are kept. The caller is
/// responsible for archiving the incumbent first.
void reset_population(Population& pop,
                      const BrkgaConfig& config,
                      const Decoder& decoder,
                      RngStream& rng);

/**
 * Shake: applies ceil(beta * len) perturbation moves to each elite member,
 * each move drawn uniformly between resampling one random key and swapping
 * two random key positions, then replaces every non-elite member with a
 * fresh random chromosome. beta = 0 leaves the elites untouched but still
 * re-randomizes the non-elite set. Everything touched is re-decoded and the
 * population is re-sorted. Throws std::invalid_argument unless 0 <= beta <= 1.
 */
void shake(Population& pop,
           double beta,
           const BrkgaConfig& config,
           const Decoder& decoder,
           RngStream& rng);

/**
 * Ring-topology elite migration: the best `count` members of island k
 * replace the worst `count` members of island (k+1) mod K, simultaneously
 * for all k, after which every island is re-sorted. A single island or
 * count = 0 is a no-op. The global best can only be duplicated, never lost.
 * Throws std::invalid_argument when count exceeds an island's elite size.
 */
void migrate(std::vector<Population>& islands,
             std::size_t count,
             std::size_t objective = 0);

/**
 * Greedy elite diversity filter: scans the sorted members best-first and
 * selects those whose distance to every already selected member is at least
 * min_dist, until `target` members are selected. If fewer qualify, the best
 * skipped members fill the remaining slots. Returns the selected ranks in
 * ascending order; with min_dist = 0 this is exactly the plain elite
 * partition. Throws std::invalid_argument when target is 0, exceeds the
 * member count, or the members are not decoded.
 */
std::vector<std::size_t> elite_diversity_filter(const std::vector<Individual>& sorted_members,
                                                std::size_t target,
                                                double min_dist,
                                                const DistanceFn& metric);

/// Mean over all unordered member pairs of the mean absolute key difference.
/// 0 means a fully converged population. Throws std::invalid_argument when
/// fewer than two members are present.
double population_diversity(const Population& pop);

} // namespace brkga

#endif // BRKGA_DIVERSITY_HPP_
