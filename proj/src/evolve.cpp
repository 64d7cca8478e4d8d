#include "brkga/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace brkga {

std::vector<std::size_t> sample_distinct(std::vector<std::size_t> candidates,
                                         std::size_t k,
                                         RngStream& rng) {
    if (k > candidates.size())
        throw std::invalid_argument("sample_distinct: k exceeds the candidate count");
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_index(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(k);
    return candidates;
}

namespace {

// Parent sampling over an explicit elite rank list. elite_limit restricts the
// draw to the first so-many elite ranks (0 = all of them).
std::vector<std::size_t> select_parents_from(const std::vector<std::size_t>& elite_ranks,
                                             std::size_t p,
                                             std::size_t pi_t,
                                             std::size_t pi_e,
                                             ParentPool pool,
                                             RngStream& rng,
                                             std::size_t elite_limit) {
    if (pi_e < 1 || pi_e >= pi_t)
        throw std::invalid_argument("select_parents: need 1 <= pi_e < pi_t");
    if (pi_t > p)
        throw std::invalid_argument("select_parents: pi_t exceeds population size");

    std::size_t usable = elite_ranks.size();
    if (elite_limit > 0)
        usable = std::min(usable, elite_limit);
    if (pi_e > usable)
        throw std::invalid_argument("select_parents: pi_e exceeds the elite mating pool");

    std::vector<std::size_t> picks =
        sample_distinct(std::vector<std::size_t>(elite_ranks.begin(),
                                                 elite_ranks.begin() + usable),
                        pi_e, rng);

    std::vector<bool> taken(p, false);
    for (std::size_t r : picks)
        taken[r] = true;
    if (pool == ParentPool::NON_ELITE)
        for (std::size_t r : elite_ranks)
            taken[r] = true;

    std::vector<std::size_t> rest;
    rest.reserve(p);
    for (std::size_t r = 0; r < p; ++r)
        if (!taken[r])
            rest.push_back(r);

    const std::size_t wanted = pi_t - pi_e;
    if (wanted > rest.size())
        throw std::invalid_argument("select_parents: second-parent pool too small");
    std::vector<std::size_t> others = sample_distinct(std::move(rest), wanted, rng);

    picks.insert(picks.end(), others.begin(), others.end());
    std::sort(picks.begin(), picks.end());
    return picks;
}

void require_sorted_decoded(const Population& pop, std::size_t objective) {
    for (const Individual& member : pop.members)
        if (!member.decoded())
            throw std::invalid_argument("evolve_generation: population has undecoded members");
    for (std::size_t i = 1; i < pop.members.size(); ++i)
        if (better_than(*pop.members[i].fitness, *pop.members[i - 1].fitness, objective))
            throw std::invalid_argument("evolve_generation: population is not sorted best-first");
}

// Decodes members [from, end) of pop, optionally on several threads. Member
// order is fixed beforehand, so threading cannot change any outcome. The
// first failure (by member index) is rethrown with context.
void decode_range(Population& pop,
                  std::size_t from,
                  const Decoder& decoder,
                  std::size_t n,
                  unsigned threads) {
    const std::size_t count = pop.members.size() - from;
    auto decode_one = [&](std::size_t i) {
        try {
            decode_individual(pop.members[i], decoder, n);
        } catch (const std::exception& e) {
            throw std::runtime_error("evolve_generation: decoding new member " +
                                     std::to_string(i) + " failed: " + e.what());
        }
    };
    if (threads <= 1 || count < 2 * threads) {
        for (std::size_t i = from; i < pop.members.size(); ++i)
            decode_one(i);
        return;
    }

    std::exception_ptr first_error;
    std::size_t first_error_index = 0;
    std::mutex error_mutex;
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
    std::vector<std::thread> crew;
    crew.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        crew.emplace_back([&, w]() {
            for (std::size_t i = from + w; i < pop.members.size(); i += workers) {
                try {
                    decode_one(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(error_mutex);
                    if (!first_error || i < first_error_index) {
                        first_error = std::current_exception();
                        first_error_index = i;
                    }
                    return;
                }
            }
        });
    }
    for (std::thread& t : crew)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace

double rank_bias_weight(BiasFunction kind, std::size_t rank) {
    if (rank < 1)
        throw std::invalid_argument("rank_bias_weight: rank starts at 1");
    const double r = static_cast<double>(rank);
    switch (kind) {
    case BiasFunction::CONSTANT:
        return 1.0;
    case BiasFunction::LINEAR:
        return 1.0 / r;
    case BiasFunction::LOGINVERSE:
        return 1.0 / std::log(r + 1.0);
    case BiasFunction::QUADRATIC:
        return 1.0 / (r * r);
    case BiasFunction::EXPONENTIAL:
        return std::exp(-r);
    }
    throw std::invalid_argument("rank_bias_weight: unknown bias function");
}

std::vector<double> bias_weights(BiasFunction kind, std::size_t count) {
    std::vector<double> weights(count);
    for (std::size_t r = 0; r < count; ++r)
        weights[r] = rank_bias_weight(kind, r + 1);
    return weights;
}

Chromosome biased_uniform_crossover(const Chromosome& elite_parent,
                                    const Chromosome& other_parent,
                                    double rho,
                                    RngStream& rng) {
    if (elite_parent.size() != other_parent.size())
        throw std::invalid_argument("biased_uniform_crossover: parent lengths differ");
    if (!(rho > 0.5) || !(rho <= 1.0))
        throw std::invalid_argument("biased_uniform_crossover: rho must satisfy 0.5 < rho <= 1");
    Chromosome child(elite_parent.size());
    for (std::size_t g = 0; g < child.size(); ++g)
        child[g] = rng.next_unit() < rho ? elite_parent[g] : other_parent[g];
    return child;
}

Chromosome multi_parent_crossover(const std::vector<const Chromosome*>& parents,
                                  const std::vector<double>& weights,
                                  RngStream& rng) {
    if (parents.size() < 2)
        throw std::invalid_argument("multi_parent_crossover: need at least two parents");
    if (weights.size() != parents.size())
        throw std::invalid_argument("multi_parent_crossover: one weight per parent required");
    const std::size_t length = parents.front()->size();
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("multi_parent_crossover: weights must be finite and >= 0");
        total += w;
    }
    if (total <= 0.0)
        throw std::invalid_argument("multi_parent_crossover: weights sum to zero");
    for (const Chromosome* parent : parents)
        if (parent->size() != length)
            throw std::invalid_argument("multi_parent_crossover: parent lengths differ");

    Chromosome child(length);
    for (std::size_t g = 0; g < length; ++g) {
        const double u = rng.next_unit() * total;
        double cum = 0.0;
        std::size_t pick = parents.size() - 1; // guards against rounding at the top end
        for (std::size_t j = 0; j < weights.size(); ++j) {
            cum += weights[j];
            if (u < cum) {
                pick = j;
                break;
            }
        }
        child[g] = (*parents[pick])[g];
    }
    return child;
}

std::vector<std::size_t> select_parents(const Population& pop,
                                        std::size_t pi_t,
                                        std::size_t pi_e,
                                        ParentPool pool,
                                        RngStream& rng,
                                        std::size_t elite_limit) {
    if (pi_e > pop.elite_size)
        throw std::invalid_argument("select_parents: pi_e exceeds the elite set");
    std::vector<std::size_t> elite_ranks(pop.elite_size);
    for (std::size_t r = 0; r < pop.elite_size; ++r)
        elite_ranks[r] = r;
    return select_parents_from(elite_ranks, pop.members.size(), pi_t, pi_e, pool, rng,
                               elite_limit);
}

Population evolve_generation(const Population& pop,
                             const BrkgaConfig& config,
                             const Decoder& decoder,
                             RngStream& rng,
                             const EvolveOptions& options) {
    config.validate();
    const std::size_t p = pop.members.size();
    const std::size_t p_e = pop.elite_size;
    const std::size_t p_m = pop.mutant_size;
    if (p_e < 1 || p_e + p_m >= p)
        throw std::invalid_argument("evolve_generation: need 1 <= p_e and p_e + p_m < p");
    require_sorted_decoded(pop, options.objective);
    const std::size_t length = config.chromosome_length();
    if (pop.members.front().keys.size() != length)
        throw std::invalid_argument("evolve_generation: chromosome length differs from config");

    std::vector<std::size_t> elite_ranks;
    if (options.elite_selector) {
        elite_ranks = options.elite_selector(pop.members, p_e);
        if (elite_ranks.size() != p_e)
            throw std::invalid_argument("evolve_generation: elite selector returned wrong count");
    } else {
        elite_ranks.resize(p_e);
        for (std::size_t r = 0; r < p_e; ++r)
            elite_ranks[r] = r;
    }

    Population next;
    next.elite_size = p_e;
    next.mutant_size = p_m;
    next.members.reserve(p);
    for (std::size_t rank : elite_ranks)
        next.members.push_back(pop.members[rank]); // copies keep their fitness

    for (std::size_t i = 0; i < p_m; ++i)
        next.members.push_back({new_random_chromosome(length, rng), std::nullopt});

    const std::size_t offspring = p - p_e - p_m;
    const std::vector<double> ranked_weights =
        config.pi_t == 2 ? std::vector<double>{} : bias_weights(config.bias, config.pi_t);
    for (std::size_t i = 0; i < offspring; ++i) {
        const std::vector<std::size_t> parents =
            select_parents_from(elite_ranks, p, config.pi_t, config.pi_e,
                                config.second_parent_pool, rng, options.elite_mating_limit);
        RngStream gene_rng = rng.fork();

        std::vector<const Chromosome*> mates;
        mates.reserve(parents.size());
        for (std::size_t rank : parents)
            mates.push_back(&pop.members[rank].keys);

        Chromosome child;
        if (config.pi_t == 2) {
            double rho = options.rho_override.value_or(config.rho);
            if (config.self_adaptive)
                rho = kSelfAdaptiveRhoBase +
                      kSelfAdaptiveRhoSpan * pop.members[parents.back()].keys[config.n];
            child = multi_parent_crossover(mates, {rho, 1.0 - rho}, gene_rng);
        } else {
            child = multi_parent_crossover(mates, ranked_weights, gene_rng);
        }
        next.members.push_back({std::move(child), std::nullopt});
    }

    decode_range(next, p_e, decoder, config.n, options.threads);
    sort_members(next, options.objective);
    return next;
}

} // namespace brkga
