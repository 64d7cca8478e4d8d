#ifndef BRKGA_CORE_HPP_
#define BRKGA_CORE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brkga/rng.hpp"

namespace brkga {

/// Optimization direction of one fitness component.
enum class Sense { MINIMIZE, MAXIMIZE };

/// A chromosome is a vector of random keys, each in [0.0, 1.0).
/// The interval is half-open: 0.0 is a valid key, 1.0 is not.
using Chromosome = std::vector<double>;

/**
 * Fitness of a decoded chromosome: m objective values together with the
 * direction each component is optimized in. Single-objective runs use m = 1.
 * Comparisons are exact on the stored values; no epsilon is applied.
 */
struct Fitness {
    std::vector<double> values;
    std::vector<Sense> senses;

    std::size_t dimension() const { return values.size(); }

    bool operator==(const Fitness& other) const = default;
};

/// True when a beats b on the given component under that component's sense.
/// Equal values compare as not better, so sorts on this predicate are stable
/// with respect to prior order. Throws std::invalid_argument on mismatched
/// dimensions or senses, or a component out of range.
bool better_than(const Fitness& a, const Fitness& b, std::size_t component = 0);

/// A chromosome together with its decoded fitness. The fitness is empty
/// until the chromosome has been decoded and is never mutated afterwards
/// except by a re-decode of a changed chromosome.
struct Individual {
    Chromosome keys;
    std::optional<Fitness> fitness;

    bool decoded() const { return fitness.has_value(); }
};

/**
 * Decoder contract: a deterministic mapping from random keys to a fitness
 * value. The engine owns all randomness; decode() must be a pure function
 * of the keys (reentrant, no retained state), so that equal chromosomes
 * always receive equal fitness.
 */
class Decoder {
public:
    virtual ~Decoder() = default;

    /// Number of objective components decode() emits.
    virtual std::size_t num_objectives() const { return 1; }

    /**
     * Maps the problem-facing keys of a chromosome to its fitness.
     * The span holds exactly the problem's n keys; internal control genes
     * are stripped by the engine before the call.
     */
    virtual Fitness decode(std::span<const double> keys) const = 0;

    /// Decoded solution as a sequence of indices (tour, selected items,
    /// job order, ...) for reports. Must agree with decode().
    virtual std::vector<std::size_t> solution(std::span<const double> keys) const = 0;

    /**
     * Post-decode improvement hook. The default implementation does nothing
     * and the shipped decoders leave it that way. An override may rewrite
     * the keys (staying inside [0, 1)) and must then store the rewritten
     * chromosome's fitness in fit.
     */
    virtual void improve(std::span<double> keys, Fitness& fit) const;
};

/// Rank-bias function used to weight parents in multi-parent mating.
enum class BiasFunction { CONSTANT, LINEAR, LOGINVERSE, QUADRATIC, EXPONENTIAL };

/// Pool the non-elite parents of a mating are drawn from.
enum class ParentPool { NON_ELITE, ENTIRE };

/**
 * Static parameters of one evolution run. Plain aggregate; validate()
 * checks every invariant and throws std::invalid_argument naming the
 * violated one. Engines validate the config they receive before use.
 */
struct BrkgaConfig {
    std::size_t n = 0;     ///< chromosome length (problem keys)
    std::size_t p = 0;     ///< population size
    std::size_t p_e = 0;   ///< elite set size, 1 <= p_e < p/2
    std::size_t p_m = 0;   ///< mutants per generation, p_e + p_m < p
    double rho = 0.7;      ///< elite inheritance probability, 0.5 < rho <= 1

    std::size_t pi_t = 2;  ///< total parents per mating, pi_e < pi_t <= p
    std::size_t pi_e = 1;  ///< elite parents per mating, 1 <= pi_e <= p_e
    BiasFunction bias = BiasFunction::LOGINVERSE;
    ParentPool second_parent_pool = ParentPool::NON_ELITE;

    std::size_t islands = 1;             ///< number of independent populations
    std::size_t migration_interval = 0;  ///< generations between exchanges, 0 = never
    std::size_t migration_count = 0;     ///< individuals copied per exchange

    /// When set, two control genes ride at the end of every chromosome
    /// (crossover bias and shake intensity) and evolve with it. Decoders
    /// never see them. Requires the two-parent scheme (pi_t == 2).
    bool self_adaptive = false;

    /// Chromosome length including control genes.
    std::size_t chromosome_length() const { return n + (self_adaptive ? 2 : 0); }

    void validate() const;
};

/**
 * One population: members sorted best-first by fitness once decoded, plus
 * the elite/mutant split sizes currently in force (these may be retuned
 * between generations by a parameter controller).
 */
struct Population {
    std::vector<Individual> members;
    std::size_t elite_size = 0;
    std::size_t mutant_size = 0;

    std::size_t size() const { return members.size(); }

    /// Best member. Population must be non-empty and sorted.
    const Individual& best() const;
};

/// Fresh chromosome with length independent uniform keys in [0, 1).
Chromosome new_random_chromosome(std::size_t length, RngStream& rng);

/// Throws std::invalid_argument unless every key lies in [0.0, 1.0).
void validate_keys(const Chromosome& keys);

/**
 * Decodes one individual in place: strips control genes (keys beyond n),
 * calls the decoder, validates the result (finite values, declared
 * dimension) and stores it. Throws std::runtime_error when the decoder
 * emits NaN or a non-finite value, std::invalid_argument on dimension
 * mismatch.
 */
void decode_individual(Individual& member, const Decoder& decoder, std::size_t n);

/// Stable best-first sort of the members by the given fitness component.
/// Members must all be decoded. Ties keep their prior relative order.
void sort_members(Population& pop, std::size_t component = 0);

/**
 * Elite / non-elite split of a sorted population: the first elite_size
 * members and the rest, as non-owning views.
 */
std::pair<std::span<const Individual>, std::span<const Individual>>
partition(const Population& pop);

/**
 * Builds the initial population: warm-start chromosomes first (each of
 * length n; control genes are appended as fresh random keys when the config
 * is self-adaptive), then fresh random chromosomes up to p. Every member is
 * decoded and the result is sorted best-first.
 *
 * Throws std::invalid_argument when a warm start has the wrong length, a
 * key outside [0, 1), or there are more warm starts than p.
 */
Population init_population(const BrkgaConfig& config,
                           const Decoder& decoder,
                           const std::vector<Chromosome>& warm_starts,
                           RngStream& rng,
                           std::size_t objective = 0);

/// Formats a value with 9 significant digits ("%.9g", C locale), the fixed
/// numeric format of every report this library writes.
std::string format_sig9(double value);

/// Stable indices of keys sorted ascending by value; equal keys keep index
/// order. This is the permutation a chromosome encodes.
std::vector<std::size_t> ascending_order(std::span<const double> keys);

} // namespace brkga

#endif // BRKGA_CORE_HPP_
