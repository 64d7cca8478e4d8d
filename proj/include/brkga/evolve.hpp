#ifndef BRKGA_EVOLVE_HPP_
#define BRKGA_EVOLVE_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "brkga/core.hpp"

namespace brkga {

/// In self-adaptive mode the crossover bias of a mating is decoded from the
/// worst parent's first control gene g as rho = 0.65 + 0.15 * g, keeping it
/// inside the valid (0.5, 1] band.
inline constexpr double kSelfAdaptiveRhoBase = 0.65;
inline constexpr double kSelfAdaptiveRhoSpan = 0.15;

/// Weight the rank-bias function assigns to the parent of the given fitness
/// rank (1 = best). CONSTANT -> 1, LINEAR -> 1/r, LOGINVERSE -> 1/ln(r+1),
/// QUADRATIC -> r^-2, EXPONENTIAL -> e^-r.
double rank_bias_weight(BiasFunction kind, std::size_t rank);

/// Weights for ranks 1..count, not normalized.
std::vector<double> bias_weights(BiasFunction kind, std::size_t count);

/**
 * Classical biased uniform crossover: each gene is inherited from the elite
 * parent with probability rho, from the other parent otherwise. One uniform
 * draw per gene. Throws std::invalid_argument unless the parents have equal
 * length and 0.5 < rho <= 1.
 */
Chromosome biased_uniform_crossover(const Chromosome& elite_parent,
                                    const Chromosome& other_parent,
                                    double rho,
                                    RngStream& rng);

/**
 * Multi-parent crossover over parents ordered best-first. Each gene is
 * inherited from parent j with probability weights[j] / sum(weights), one
 * uniform draw per gene. With two parents and weights {rho, 1 - rho} this
 * reproduces the classical biased crossover draw for draw.
 *
 * Throws std::invalid_argument on fewer than two parents, mismatched
 * lengths, a weight count that differs from the parent count, a negative
 * weight, or an all-zero weight vector.
 */
Chromosome multi_parent_crossover(const std::vector<const Chromosome*>& parents,
                                  const std::vector<double>& weights,
                                  RngStream& rng);

/// Draws k distinct entries from candidates by partial Fisher-Yates,
/// consuming exactly k index draws from rng. Result order is draw order.
std::vector<std::size_t> sample_distinct(std::vector<std::size_t> candidates,
                                         std::size_t k,
                                         RngStream& rng);

/**
 * Samples the parents of one mating without replacement: pi_e distinct
 * members of the elite set (restricted to its first elite_limit members
 * when elite_limit is nonzero) and pi_t - pi_e distinct members of the
 * second-parent pool, which is either the non-elite set or the entire
 * population minus the already chosen. Returns population ranks in
 * ascending order, i.e. parents ordered best-first.
 *
 * The population must be sorted and decoded. Throws std::invalid_argument
 * when the requested counts cannot be satisfied.
 */
std::vector<std::size_t> select_parents(const Population& pop,
                                        std::size_t pi_t,
                                        std::size_t pi_e,
                                        ParentPool pool,
                                        RngStream& rng,
                                        std::size_t elite_limit = 0);

/// Per-call knobs a parameter controller may apply to one generation.
struct EvolveOptions {
    /// Crossover bias chosen by a controller; overrides config.rho.
    std::optional<double> rho_override;

    /// Restricts elite parent sampling to the first so-many elite members
    /// (a restricted candidate list). 0 means the whole elite set.
    std::size_t elite_mating_limit = 0;

    /// Optional re-selection of the elite set (e.g. a diversity filter):
    /// given the sorted members and the target size, returns the ranks that
    /// form this generation's elite set. Empty means ranks 0..p_e-1.
    std::function<std::vector<std::size_t>(const std::vector<Individual>&, std::size_t)>
        elite_selector;

    /// Fitness component the population is ranked by.
    std::size_t objective = 0;

    /// Worker threads for the decode phase. Does not affect results.
    unsigned threads = 1;
};

/**
 * Advances one population by one generation: the elite members are copied
 * unchanged, mutant_size fresh random chromosomes are added, and the
 * remaining slots are filled with mating offspring. Every offspring's gene
 * draws come from a dedicated substream forked off rng, so the decode phase
 * can run on several threads without changing any result. All new members
 * are decoded eagerly and the returned population is sorted best-first.
 *
 * In a self-adaptive config the crossover bias of each mating is decoded
 * from the worst-ranked parent's first control gene; rho overrides are
 * ignored in that mode.
 *
 * The input population is left untouched. Decoder failures are rethrown
 * with the failing member attached to the message.
 */
Population evolve_generation(const Population& pop,
                             const BrkgaConfig& config,
                             const Decoder& decoder,
                             RngStream& rng,
                             const EvolveOptions& options = {});

} // namespace brkga

#endif // BRKGA_EVOLVE_HPP_
