#ifndef BRKGA_IPR_HPP_
#define BRKGA_IPR_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "brkga/core.hpp"
#include "brkga/diversity.hpp"

namespace brkga {

/// Count of key positions whose indicator (key >= theta) differs between
/// the two chromosomes. Suits threshold decoders (subset selection).
double hamming_theta_distance(const Chromosome& a, const Chromosome& b, double theta = 0.5);

/// Number of discordant index pairs between the permutations the two
/// chromosomes encode (their ascending key orders). Suits permutation
/// decoders. Maximum is len * (len - 1) / 2 for opposite orders.
double kendall_tau_distance(const Chromosome& a, const Chromosome& b);

/// How a block is moved toward the guide during path relinking.
enum class IprVariant {
    INDICATOR,   ///< block keys are copied from the guide
    PERMUTATION, ///< the base's own block keys are reordered to the guide's relative order
};

/// One adoption step of an IPR walk, reported to the observer.
struct IprStep {
    std::size_t adopted_block;  ///< index of the block adopted this step
    double distance_to_guide;   ///< variant metric, measured after adoption
    Fitness fitness;            ///< fitness of the walk point after adoption
};
using IprObserver = std::function<void(const IprStep&)>;

/**
 * Implicit path relinking from base toward guide.
 *
 * The chromosome is cut into ceil(len / block_size) contiguous blocks. Each
 * step tentatively moves every not-yet-adopted block of the current point
 * toward the guide (per the variant), decodes the tentatives, and adopts
 * the best-scoring one permanently (ties: lowest block index). Blocks whose
 * move would not change the chromosome are dropped without a decode. The
 * walk stops after ceil(depth * blocks) adoptions, or earlier when no block
 * changes anything; with base = guide it returns base untouched.
 *
 * Returns the best individual observed anywhere on the walk, including the
 * base itself, so the result is never worse than base. After every adoption
 * the variant metric distance to the guide is non-increasing. Decode budget:
 * at most ceil(depth * blocks) * blocks calls.
 *
 * Both endpoints must be decoded and of equal length. block_size larger
 * than the chromosome acts as one single block. Throws
 * std::invalid_argument on block_size = 0 or depth outside (0, 1].
 */
Individual ipr(const Individual& base,
               const Individual& guide,
               IprVariant variant,
               std::size_t block_size,
               double depth,
               const Decoder& decoder,
               std::size_t n,
               const IprObserver& observer = {});

/// Base/guide pair picked for relinking, with their island indices.
struct IprPair {
    Individual base;
    Individual guide;
    std::size_t base_island = 0;
    std::size_t guide_island = 0;
};

/**
 * Samples an elite base/guide pair from two distinct islands whose distance
 * under the given metric is at least min_dist. Attempts are budgeted to the
 * total elite count across islands; when no attempt qualifies, returns
 * nullopt (the caller should skip relinking this round). Throws
 * std::invalid_argument with fewer than two islands.
 */
std::optional<IprPair> pick_ipr_pair(const std::vector<Population>& islands,
                                     double min_dist,
                                     const DistanceFn& metric,
                                     RngStream& rng);

} // namespace brkga

#endif // BRKGA_IPR_HPP_
