#ifndef BRKGA_CONTROL_HPP_
#define BRKGA_CONTROL_HPP_

#include <cstdint>
#include <vector>

#include "brkga/core.hpp"
#include "brkga/evolve.hpp"

namespace brkga {

/**
 * Endpoints of the deterministic parameter schedules: over g_max
 * generations the population size, mutant count and elite-list fraction
 * alpha shrink linearly from their max to their min while the elite count
 * grows from its min to its max.
 *
 * validate() additionally requires 2 * pe_max < p_min and
 * pe_max + pm_max < p_min: with linear schedules between integer endpoints
 * these two conditions keep every rounded per-generation snapshot inside
 * the BrkgaConfig invariants without any clamping.
 */
struct ScheduleBounds {
    std::size_t p_max = 0, p_min = 0;
    std::size_t pe_min = 0, pe_max = 0;
    std::size_t pm_max = 0, pm_min = 0;
    double alpha_max = 0.0, alpha_min = 0.0;
    std::uint64_t g_max = 0;

    void validate() const;
};

/// Parameter values in force for one generation.
struct ControlSnapshot {
    std::size_t p = 0;
    std::size_t p_e = 0;
    std::size_t p_m = 0;
    double alpha = 0.0;
};

/**
 * Linear schedule tick: interpolates each parameter between its endpoints
 * at progress gen / g_max (clamped to 1 beyond g_max) and rounds the counts
 * to the nearest integer. Directions are monotone in gen: p, p_m and alpha
 * never increase, p_e never decreases, and every snapshot satisfies the
 * population invariants. Throws std::invalid_argument on invalid bounds.
 */
ControlSnapshot abrkga_tick(std::uint64_t gen, const ScheduleBounds& bounds);

/**
 * Resizes a population in place: shrinking truncates the worst members,
 * growing appends fresh decoded mutants, and the result is re-sorted.
 * Throws std::invalid_argument when new_p < elite_size + mutant_size + 1
 * under the population's current split.
 */
void apply_population_resize(Population& pop,
                             std::size_t new_p,
                             const BrkgaConfig& config,
                             const Decoder& decoder,
                             RngStream& rng,
                             std::size_t objective = 0);

/// Crossover bias decoded from a mating parent's first control gene:
/// rho = 0.65 + 0.15 * gene. The chromosome must carry control genes
/// (length n + 2); otherwise self-adaptive mode is off and this throws
/// std::invalid_argument.
double self_adaptive_rho(const Chromosome& non_elite_parent, std::size_t n);

/// Shake intensity decoded from a chromosome's second control gene.
/// Same length requirement as self_adaptive_rho.
double self_adaptive_shake_intensity(const Chromosome& keys, std::size_t n);

/// Q-learning hyperparameters. The exploration rate decays as
/// eta(t) = eta0 * exp(-lambda * t).
struct QParams {
    double learning_rate = 0.1;
    double discount = 0.8;
    double eta0 = 1.0;
    double lambda = 0.02;
};

/**
 * Tabular Q-learning over a finite state/action grid, used to retune
 * evolution parameters online. Values start at zero.
 */
class QTable {
public:
    QTable(std::size_t num_states, std::size_t num_actions, QParams params = {});

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }
    const QParams& params() const { return params_; }

    double value(std::size_t state, std::size_t action) const;

    /// One-step update:
    /// Q(s,a) += lr * (reward + discount * max_a' Q(s',a') - Q(s,a)).
    void update(std::size_t state, std::size_t action, double reward, std::size_t next_state);

    /// Epsilon-greedy pick at time t: with probability eta(t) a uniform
    /// action, otherwise the greedy one; value ties go to the lowest
    /// action index so replays are deterministic.
    std::size_t select_action(std::size_t state, std::uint64_t t, RngStream& rng) const;

    double exploration_rate(std::uint64_t t) const;

private:
    std::size_t index(std::size_t state, std::size_t action) const;

    std::size_t num_states_;
    std::size_t num_actions_;
    QParams params_;
    std::vector<double> q_;
};

} // namespace brkga

#endif // BRKGA_CONTROL_HPP_
