#include "brkga/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brkga {

void ScheduleBounds::validate() const {
    if (g_max < 1)
        throw std::invalid_argument("ScheduleBounds: g_max must be at least 1");
    if (p_min < 3)
        throw std::invalid_argument("ScheduleBounds: p_min must be at least 3");
    if (p_min > p_max)
        throw std::invalid_argument("ScheduleBounds: p_min must not exceed p_max");
    if (pe_min < 1 || pe_min > pe_max)
        throw std::invalid_argument("ScheduleBounds: need 1 <= pe_min <= pe_max");
    if (pm_min < 1 || pm_min > pm_max)
        throw std::invalid_argument("ScheduleBounds: need 1 <= pm_min <= pm_max");
    if (!(alpha_min >= 0.0) || alpha_min > alpha_max || alpha_max > 1.0)
        throw std::invalid_argument("ScheduleBounds: need 0 <= alpha_min <= alpha_max <= 1");
    if (2 * pe_max >= p_min)
        throw std::invalid_argument("ScheduleBounds: 2 * pe_max must be smaller than p_min");
    if (pe_max + pm_max >= p_min)
        throw std::invalid_argument("ScheduleBounds: pe_max + pm_max must be smaller than p_min");
}

ControlSnapshot abrkga_tick(std::uint64_t gen, const ScheduleBounds& bounds) {
    bounds.validate();
    const double t = std::min(1.0, static_cast<double>(gen) / static_cast<double>(bounds.g_max));
    auto blend = [t](double from, double to) { return from + (to - from) * t; };
    auto count = [](double v) { return static_cast<std::size_t>(std::llround(v)); };

    ControlSnapshot snap;
    snap.p = count(blend(static_cast<double>(bounds.p_max), static_cast<double>(bounds.p_min)));
    snap.p_e = count(blend(static_cast<double>(bounds.pe_min), static_cast<double>(bounds.pe_max)));
    snap.p_m = count(blend(static_cast<double>(bounds.pm_max), static_cast<double>(bounds.pm_min)));
    snap.alpha = blend(bounds.alpha_max, bounds.alpha_min);
    return snap;
}

void apply_population_resize(Population& pop,
                             std::size_t new_p,
                             const BrkgaConfig& config,
                             const Decoder& decoder,
                             RngStream& rng,
                             std::size_t objective) {
    if (new_p < pop.elite_size + pop.mutant_size + 1)
        throw std::invalid_argument(
            "apply_population_resize: new size must exceed elite_size + mutant_size");
    if (new_p == pop.members.size())
        return;
    if (new_p < pop.members.size()) {
        pop.members.resize(new_p); // members are sorted best-first: drop the worst
        return;
    }
    const std::size_t length = config.chromosome_length();
    while (pop.members.size() < new_p) {
        Individual member{new_random_chromosome(length, rng), std::nullopt};
        decode_individual(member, decoder, config.n);
        pop.members.push_back(std::move(member));
    }
    sort_members(pop, objective);
}

double self_adaptive_rho(const Chromosome& non_elite_parent, std::size_t n) {
    if (non_elite_parent.size() != n + 2)
        throw std::invalid_argument(
            "self_adaptive_rho: chromosome carries no control genes (mode is off)");
    return kSelfAdaptiveRhoBase + kSelfAdaptiveRhoSpan * non_elite_parent[n];
}

double self_adaptive_shake_intensity(const Chromosome& keys, std::size_t n) {
    if (keys.size() != n + 2)
        throw std::invalid_argument(
            "self_adaptive_shake_intensity: chromosome carries no control genes (mode is off)");
    return keys[n + 1];
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, QParams params)
    : num_states_(num_states), num_actions_(num_actions), params_(params),
      q_(num_states * num_actions, 0.0) {
    if (num_states < 1 || num_actions < 1)
        throw std::invalid_argument("QTable: need at least one state and one action");
    if (!(params_.learning_rate > 0.0) || params_.learning_rate > 1.0)
        throw std::invalid_argument("QTable: learning rate must lie in (0, 1]");
    if (params_.discount < 0.0 || params_.discount > 1.0)
        throw std::invalid_argument("QTable: discount must lie in [0, 1]");
    if (params_.eta0 < 0.0 || params_.eta0 > 1.0)
        throw std::invalid_argument("QTable: eta0 must lie in [0, 1]");
    if (params_.lambda < 0.0)
        throw std::invalid_argument("QTable: lambda must be non-negative");
}

std::size_t QTable::index(std::size_t state, std::size_t action) const {
    if (state >= num_states_ || action >= num_actions_)
        throw std::invalid_argument("QTable: state or action out of range");
    return state * num_actions_ + action;
}

double QTable::value(std::size_t state, std::size_t action) const {
    return q_[index(state, action)];
}

void QTable::update(std::size_t state, std::size_t action, double reward,
                    std::size_t next_state) {
    double best_next = q_[index(next_state, 0)];
    for (std::size_t a = 1; a < num_actions_; ++a)
        best_next = std::max(best_next, q_[index(next_state, a)]);
    double& cell = q_[index(state, action)];
    cell += params_.learning_rate * (reward + params_.discount * best_next - cell);
}

std::size_t QTable::select_action(std::size_t state, std::uint64_t t, RngStream& rng) const {
    if (state >= num_states_)
        throw std::invalid_argument("QTable: state out of range");
    if (rng.next_unit() < exploration_rate(t))
        return rng.next_index(num_actions_);
    std::size_t best = 0;
    for (std::size_t a = 1; a < num_actions_; ++a)
        if (q_[index(state, a)] > q_[index(state, best)])
            best = a; // strict >: ties keep the lowest action index
    return best;
}

double QTable::exploration_rate(std::uint64_t t) const {
    return params_.eta0 * std::exp(-params_.lambda * static_cast<double>(t));
}

} // namespace brkga
