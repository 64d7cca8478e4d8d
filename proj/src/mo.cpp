#include "brkga/mo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace brkga {

namespace {

void require_same_shape(const Fitness& f, const Fitness& g, const char* who) {
    if (f.values.size() != g.values.size())
        throw std::invalid_argument(std::string(who) + ": dimensions differ");
    if (f.senses != g.senses)
        throw std::invalid_argument(std::string(who) + ": senses differ");
}

// Value normalized to minimization sense.
double min_sense(const Fitness& f, std::size_t k) {
    return f.senses[k] == Sense::MINIMIZE ? f.values[k] : -f.values[k];
}

bool lex_less(const Fitness& a, const Fitness& b) {
    return std::lexicographical_compare(a.values.begin(), a.values.end(),
                                        b.values.begin(), b.values.end());
}

bool same_keys(const Chromosome& a, const Chromosome& b) {
    return a == b;
}

// Stream id offset for pi islands; omega islands use 1 + island index, the
// same scheme the single-objective engine uses for its islands.
constexpr std::uint64_t kPiStreamBase = 0x70490000ULL;

void archive_population(ParetoArchive& archive, const Population& pop) {
    for (const Individual& member : pop.members)
        archive.insert(member);
}

void add_to_pool(std::vector<Individual>& pool, const Individual& candidate) {
    for (const Individual& held : pool)
        if (same_keys(held.keys, candidate.keys))
            return;
    pool.push_back(candidate);
}

// One generation of a pi island: pool-elite mating, own non-elite second
// parents, offspring and mutants always pass.
void pi_island_generation(PiIsland& island,
                          const MpConfig& config,
                          const Decoder& decoder,
                          const std::vector<Population>& omega,
                          RngStream& rng,
                          ParetoArchive& archive,
                          unsigned threads) {
    Population& pop = island.pop;
    const std::size_t p = pop.members.size();
    const std::size_t p_e = pop.elite_size;
    const std::size_t p_m = pop.mutant_size;
    const BrkgaConfig& base = config.base;

    // Refresh the pool: best of every omega island plus this island's best.
    for (const Population& other : omega)
        add_to_pool(island.pool, other.members.front());
    add_to_pool(island.pool, pop.members.front());

    // Rank the pool and keep its best slice as the elite mating set.
    std::vector<Fitness> pool_fitness;
    pool_fitness.reserve(island.pool.size());
    for (const Individual& held : island.pool)
        pool_fitness.push_back(*held.fitness);
    std::vector<std::size_t> pool_order = multi_objective_order(pool_fitness);
    const std::size_t elite_pool_size = std::min(p_e, pool_order.size());
    pool_order.resize(elite_pool_size);
    if (base.pi_e > elite_pool_size)
        throw std::invalid_argument("mp_brkga_generation: pi_e exceeds the elite pool");

    Population next;
    next.elite_size = p_e;
    next.mutant_size = p_m;
    next.members.reserve(p);
    for (std::size_t rank = 0; rank < p_e; ++rank)
        next.members.push_back(pop.members[rank]);
    const std::size_t length = base.chromosome_length();
    for (std::size_t i = 0; i < p_m; ++i)
        next.members.push_back({new_random_chromosome(length, rng), std::nullopt});

    std::vector<std::size_t> own_ranks(p - p_e);
    std::iota(own_ranks.begin(), own_ranks.end(), p_e);

    const std::size_t offspring = p - p_e - p_m;
    const std::vector<double> ranked_weights =
        base.pi_t == 2 ? std::vector<double>{} : bias_weights(base.bias, base.pi_t);
    for (std::size_t i = 0; i < offspring; ++i) {
        std::vector<std::size_t> pool_picks = sample_distinct(pool_order, base.pi_e, rng);
        std::sort(pool_picks.begin(), pool_picks.end(),
                  [&pool_order](std::size_t a, std::size_t b) {
                      return std::find(pool_order.begin(), pool_order.end(), a) <
                             std::find(pool_order.begin(), pool_order.end(), b);
                  });
        std::vector<std::size_t> own_picks =
            sample_distinct(own_ranks, base.pi_t - base.pi_e, rng);
        std::sort(own_picks.begin(), own_picks.end());

        std::vector<const Chromosome*> mates;
        mates.reserve(base.pi_t);
        for (std::size_t pick : pool_picks)
            mates.push_back(&island.pool[pick].keys);
        for (std::size_t rank : own_picks)
            mates.push_back(&pop.members[rank].keys);

        RngStream gene_rng = rng.fork();
        Chromosome child;
        if (base.pi_t == 2) {
            double rho = base.rho;
            if (base.self_adaptive)
                rho = kSelfAdaptiveRhoBase +
                      kSelfAdaptiveRhoSpan * pop.members[own_picks.back()].keys[base.n];
            child = multi_parent_crossover(mates, {rho, 1.0 - rho}, gene_rng);
        } else {
            child = multi_parent_crossover(mates, ranked_weights, gene_rng);
        }
        next.members.push_back({std::move(child), std::nullopt});
    }

    (void)threads;
    for (std::size_t i = p_e; i < next.members.size(); ++i) {
        decode_individual(next.members[i], decoder, base.n);
        archive.insert(next.members[i]);
    }
    sort_members_multi(next);
    pop = std::move(next);
}

} // namespace

bool dominates(const Fitness& f, const Fitness& g) {
    require_same_shape(f, g, "dominates");
    if (f.values.empty())
        throw std::invalid_argument("dominates: empty fitness");
    bool strictly_better = false;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double a = min_sense(f, k);
        const double b = min_sense(g, k);
        if (a > b)
            return false;
        if (a < b)
            strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<Fitness>& members) {
    const std::size_t n = members.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0)
        return fronts;

    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> dominators(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(members[i], members[j])) {
                dominated_by[i].push_back(j);
                ++dominators[j];
            } else if (dominates(members[j], members[i])) {
                dominated_by[j].push_back(i);
                ++dominators[i];
            }
        }

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (dominators[i] == 0)
            current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated_by[i])
                if (--dominators[j] == 0)
                    next.push_back(j);
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Fitness>& front) {
    const std::size_t n = front.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0)
        return distance;
    for (std::size_t i = 1; i < n; ++i)
        require_same_shape(front[0], front[i], "crowding_distance");
    const std::size_t m = front[0].values.size();
    const double inf = std::numeric_limits<double>::infinity();

    // Canonical arrangement first, so the result cannot depend on the order
    // the members were handed in.
    std::vector<std::size_t> canon(n);
    std::iota(canon.begin(), canon.end(), std::size_t{0});
    std::stable_sort(canon.begin(), canon.end(), [&front](std::size_t a, std::size_t b) {
        return lex_less(front[a], front[b]);
    });

    for (std::size_t k = 0; k < m; ++k) {
        std::vector<std::size_t> order = canon;
        std::stable_sort(order.begin(), order.end(), [&front, k](std::size_t a, std::size_t b) {
            return front[a].values[k] < front[b].values[k];
        });
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double range = front[order.back()].values[k] - front[order.front()].values[k];
        if (range > 0.0)
            for (std::size_t i = 1; i + 1 < n; ++i)
                distance[order[i]] +=
                    (front[order[i + 1]].values[k] - front[order[i - 1]].values[k]) / range;
    }

    // Members with identical fitness vectors share the group's largest
    // distance (they are interchangeable).
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        double group_max = 0.0;
        while (j < n && front[canon[j]].values == front[canon[i]].values) {
            group_max = std::max(group_max, distance[canon[j]]);
            ++j;
        }
        for (std::size_t g = i; g < j; ++g)
            distance[canon[g]] = group_max;
        i = j;
    }
    return distance;
}

std::vector<std::size_t> multi_objective_order(const std::vector<Fitness>& members) {
    std::vector<std::size_t> order;
    order.reserve(members.size());
    for (const std::vector<std::size_t>& front : non_dominated_sort(members)) {
        std::vector<Fitness> front_fitness;
        front_fitness.reserve(front.size());
        for (std::size_t idx : front)
            front_fitness.push_back(members[idx]);
        const std::vector<double> crowd = crowding_distance(front_fitness);

        std::vector<std::size_t> within(front.size());
        std::iota(within.begin(), within.end(), std::size_t{0});
        std::stable_sort(within.begin(), within.end(), [&crowd](std::size_t a, std::size_t b) {
            return crowd[a] > crowd[b];
        });
        for (std::size_t w : within)
            order.push_back(front[w]);
    }
    return order;
}

void sort_members_multi(Population& pop) {
    std::vector<Fitness> fitness;
    fitness.reserve(pop.members.size());
    for (const Individual& member : pop.members) {
        if (!member.decoded())
            throw std::invalid_argument("sort_members_multi: undecoded member");
        fitness.push_back(*member.fitness);
    }
    const std::vector<std::size_t> order = multi_objective_order(fitness);
    std::vector<Individual> arranged;
    arranged.reserve(pop.members.size());
    for (std::size_t idx : order)
        arranged.push_back(std::move(pop.members[idx]));
    pop.members = std::move(arranged);
}

Fitness weighted_aggregate(const Fitness& f, const std::vector<double>& weights) {
    if (weights.size() != f.values.size())
        throw std::invalid_argument("weighted_aggregate: one weight per component required");
    double total_weight = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("weighted_aggregate: weights must be finite and >= 0");
        total_weight += w;
    }
    if (total_weight <= 0.0)
        throw std::invalid_argument("weighted_aggregate: weights sum to zero");
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
        sum += weights[k] * min_sense(f, k);
    return Fitness{{sum}, {Sense::MINIMIZE}};
}

bool ParetoArchive::insert(const Individual& candidate) {
    if (!candidate.decoded())
        throw std::invalid_argument("ParetoArchive::insert: candidate is not decoded");
    for (const Individual& held : entries_) {
        if (same_keys(held.keys, candidate.keys))
            return false;
        if (dominates(*held.fitness, *candidate.fitness))
            return false;
    }
    std::erase_if(entries_, [&candidate](const Individual& held) {
        return dominates(*candidate.fitness, *held.fitness);
    });
    entries_.push_back(candidate);
    return true;
}

std::vector<std::size_t> ParetoArchive::export_order() const {
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        if (entries_[a].fitness->values != entries_[b].fitness->values)
            return lex_less(*entries_[a].fitness, *entries_[b].fitness);
        return entries_[a].keys < entries_[b].keys;
    });
    return order;
}

void ParetoArchive::write_tsv(std::ostream& out) const {
    for (std::size_t idx : export_order()) {
        const std::vector<double>& values = entries_[idx].fitness->values;
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (k > 0)
                out << '\t';
            out << format_sig9(values[k]);
        }
        out << '\n';
    }
}

double hypervolume_2d(const std::vector<Fitness>& front, const Fitness& ref_point) {
    if (ref_point.values.size() != 2)
        throw std::invalid_argument("hypervolume_2d: only two objectives are supported");
    if (front.empty())
        return 0.0;
    for (const Fitness& f : front) {
        require_same_shape(f, ref_point, "hypervolume_2d");
        if (!dominates(f, ref_point))
            throw std::invalid_argument("hypervolume_2d: every point must dominate ref_point");
    }

    // Work in minimization coordinates; dominated points add nothing, so
    // keep only the maximal staircase.
    std::vector<std::pair<double, double>> points;
    points.reserve(front.size());
    for (const Fitness& f : front)
        points.emplace_back(min_sense(f, 0), min_sense(f, 1));
    std::sort(points.begin(), points.end()); // x ascending, then y ascending
    std::vector<std::pair<double, double>> stair;
    double min_y = std::numeric_limits<double>::infinity();
    for (const auto& pt : points) {
        // A point survives only if it strictly improves y over everything
        // with smaller-or-equal x; the rest is dominated and adds no area.
        if (pt.second < min_y) {
            stair.push_back(pt);
            min_y = pt.second;
        }
    }

    const double rx = min_sense(ref_point, 0);
    const double ry = min_sense(ref_point, 1);
    double area = 0.0;
    double prev_y = ry;
    for (const auto& pt : stair) {
        area += (rx - pt.first) * (prev_y - pt.second);
        prev_y = pt.second;
    }
    return area;
}

void MpConfig::validate() const {
    base.validate();
    if (base.second_parent_pool != ParentPool::NON_ELITE)
        throw std::invalid_argument(
            "MpConfig: pi islands mate pool elites with own non-elites (NON_ELITE only)");
}

MpState mp_init(const MpConfig& config, const Decoder& decoder, std::uint64_t seed) {
    config.validate();
    const std::size_t m = decoder.num_objectives();
    if (m < 1)
        throw std::invalid_argument("mp_init: decoder declares no objectives");

    MpState state;
    state.omega_rng.reserve(m);
    state.omega.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        state.omega_rng.emplace_back(seed, 1 + i);
        state.omega.push_back(
            init_population(config.base, decoder, {}, state.omega_rng.back(), i));
        archive_population(state.archive, state.omega.back());
    }
    state.pi_rng.reserve(config.pi_islands);
    state.pi.reserve(config.pi_islands);
    for (std::size_t j = 0; j < config.pi_islands; ++j) {
        state.pi_rng.emplace_back(seed, kPiStreamBase + j);
        PiIsland island;
        island.pop = init_population(config.base, decoder, {}, state.pi_rng.back());
        sort_members_multi(island.pop);
        archive_population(state.archive, island.pop);
        state.pi.push_back(std::move(island));
    }
    return state;
}

void mp_brkga_generation(MpState& state,
                         const MpConfig& config,
                         const Decoder& decoder,
                         unsigned threads) {
    config.validate();
    if (state.omega.size() != decoder.num_objectives())
        throw std::invalid_argument("mp_brkga_generation: one omega island per objective");

    for (std::size_t i = 0; i < state.omega.size(); ++i) {
        EvolveOptions options;
        options.objective = i;
        options.threads = threads;
        state.omega[i] =
            evolve_generation(state.omega[i], config.base, decoder, state.omega_rng[i], options);
        archive_population(state.archive, state.omega[i]);
    }
    for (std::size_t j = 0; j < state.pi.size(); ++j)
        pi_island_generation(state.pi[j], config, decoder, state.omega, state.pi_rng[j],
                             state.archive, threads);

    ++state.generation;
    if (config.pool_mix_interval > 0 && state.pi.size() > 1 &&
        state.generation % config.pool_mix_interval == 0) {
        // Snapshot every island's elite set first, then merge into all
        // other pools with duplicates removed.
        std::vector<std::vector<Individual>> elites(state.pi.size());
        for (std::size_t j = 0; j < state.pi.size(); ++j) {
            const Population& pop = state.pi[j].pop;
            elites[j].assign(pop.members.begin(),
                             pop.members.begin() +
                                 static_cast<std::ptrdiff_t>(
                                     std::min(pop.elite_size, pop.members.size())));
        }
        for (std::size_t j = 0; j < state.pi.size(); ++j)
            for (std::size_t k = 0; k < state.pi.size(); ++k) {
                if (j == k)
                    continue;
                for (const Individual& member : elites[j])
                    add_to_pool(state.pi[k].pool, member);
            }
    }
}

} // namespace brkga
