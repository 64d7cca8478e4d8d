#ifndef BRKGA_MO_HPP_
#define BRKGA_MO_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "brkga/core.hpp"
#include "brkga/evolve.hpp"

namespace brkga {

/// Pareto dominance: f is no worse than g in every component (under each
/// component's sense) and strictly better in at least one. Comparisons are
/// exact. Throws std::invalid_argument on dimension or sense mismatch.
bool dominates(const Fitness& f, const Fitness& g);

/**
 * Non-dominated sorting: partitions the members into fronts, where front 0
 * is the set of members dominated by nobody and front k+1 is what becomes
 * non-dominated once fronts 0..k are removed. Every index appears in
 * exactly one front; indices inside a front are ascending.
 */
std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<Fitness>& members);

/**
 * NSGA-II crowding distance of every member of one front, in input order.
 * Per objective, members at the extremes receive +infinity and interior
 * members accumulate (next - prev) / (max - min); objectives with zero
 * range contribute nothing. Members with identical fitness vectors share
 * the group's largest distance, which keeps the result independent of the
 * input order.
 */
std::vector<double> crowding_distance(const std::vector<Fitness>& front);

/// Ranks members for a multi-objective population: by front, then by
/// crowding distance (larger first), then by index. Returns the member
/// indices best-first.
std::vector<std::size_t> multi_objective_order(const std::vector<Fitness>& members);

/// Re-sorts a population best-first by front and crowding distance.
void sort_members_multi(Population& pop);

/**
 * Scalarizes a fitness to a single MINIMIZE component: the weighted sum of
 * the values after normalizing every component to minimization sense
 * (MAXIMIZE components are negated). Weights must be non-negative, one per
 * component, with a positive sum.
 */
Fitness weighted_aggregate(const Fitness& f, const std::vector<double>& weights);

/**
 * Archive of mutually non-dominated individuals. insert() rejects a
 * candidate that is dominated by an entry or whose chromosome is already
 * present; otherwise it removes every entry the candidate dominates and
 * adopts it. Incomparable entries with equal fitness but different
 * chromosomes coexist. The archive is an antichain at all times.
 */
class ParetoArchive {
public:
    /// Returns true when the candidate entered the archive. The candidate
    /// must be decoded.
    bool insert(const Individual& candidate);

    const std::vector<Individual>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    void clear() { entries_.clear(); }

    /// Entry indices in export order: lexicographic by objective values
    /// (chromosome as final tiebreak, so the order is always deterministic).
    std::vector<std::size_t> export_order() const;

    /// One line per entry, tab-separated objective values with 9 significant
    /// digits, in export order.
    void write_tsv(std::ostream& out) const;

private:
    std::vector<Individual> entries_;
};

/**
 * Hypervolume enclosed between a two-objective front and a reference point:
 * the area of the union of the boxes spanned by each point and the
 * reference. Every point must dominate the reference point; adding a
 * dominated point never changes the value. Dimensions other than 2 are
 * unsupported and throw std::invalid_argument.
 */
double hypervolume_2d(const std::vector<Fitness>& front, const Fitness& ref_point);

/// Parameters of a multi-population multi-objective run: one single-objective
/// island per objective plus pi_islands multi-objective islands whose elite
/// mating pools exchange solutions every pool_mix_interval generations.
struct MpConfig {
    BrkgaConfig base;                    ///< per-island parameters
    std::size_t pi_islands = 1;
    std::size_t pool_mix_interval = 10;  ///< 0 = pools never mix

    void validate() const;
};

/// A multi-objective island: its population (ranked by front and crowding)
/// plus its persistent elite pool, deduplicated by exact chromosome.
struct PiIsland {
    Population pop;
    std::vector<Individual> pool;
};

/// Full state of a multi-population multi-objective run.
struct MpState {
    std::vector<Population> omega;  ///< one island per objective, classical evolution
    std::vector<PiIsland> pi;
    ParetoArchive archive;
    std::uint64_t generation = 0;
    std::vector<RngStream> omega_rng;
    std::vector<RngStream> pi_rng;
};

/// Builds and decodes all islands and seeds the archive with every initial
/// member. Island i of omega ranks by objective i alone.
MpState mp_init(const MpConfig& config, const Decoder& decoder, std::uint64_t seed);

/**
 * Advances every island by one generation. Omega islands evolve classically
 * under their own objective. Each pi island first refreshes its pool with
 * the best of every omega island and its own best member, then mates elite
 * parents drawn from the pool (ranked by front and crowding) with its own
 * non-elite members; offspring and mutants always pass into the next
 * population. Every newly decoded individual is offered to the archive.
 * When the generation counter hits a multiple of pool_mix_interval, the
 * elite members of every pi island are merged into all other pi pools,
 * duplicates removed.
 *
 * With one objective and no pi islands this reduces exactly to
 * evolve_generation on the single omega island.
 */
void mp_brkga_generation(MpState& state,
                         const MpConfig& config,
                         const Decoder& decoder,
                         unsigned threads = 1);

} // namespace brkga

#endif // BRKGA_MO_HPP_
