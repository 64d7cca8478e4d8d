#include "brkga/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "brkga/control.hpp"
#include "brkga/diversity.hpp"
#include "brkga/evolve.hpp"
#include "brkga/ipr.hpp"

namespace brkga {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Scans the islands' best members and adopts any strict improvement over
// the run incumbent. Returns true when the incumbent improved.
bool update_incumbent(const std::vector<Population>& islands,
                      std::optional<Fitness>& best,
                      Chromosome& best_keys) {
    bool improved = false;
    for (const Population& pop : islands) {
        const Individual& candidate = pop.best();
        if (!best || better_than(*candidate.fitness, *best)) {
            best = candidate.fitness;
            best_keys = candidate.keys;
            improved = true;
        }
    }
    return improved;
}

const Fitness& best_across_islands(const std::vector<Population>& islands) {
    const Fitness* best = nullptr;
    for (const Population& pop : islands) {
        const Fitness& candidate = *pop.best().fitness;
        if (best == nullptr || better_than(candidate, *best))
            best = &candidate;
    }
    return *best;
}

double mean_fitness(const std::vector<Population>& islands, std::size_t component) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const Population& pop : islands)
        for (const Individual& member : pop.members) {
            sum += member.fitness->values[component];
            ++count;
        }
    return sum / static_cast<double>(count);
}

double mean_diversity(const std::vector<Population>& islands) {
    double sum = 0.0;
    for (const Population& pop : islands)
        sum += population_diversity(pop);
    return sum / static_cast<double>(islands.size());
}

// Q-learning controller grid: 4 stall-severity states x 27 parameter
// actions (crossover bias x elite fraction x mutant fraction).
constexpr std::size_t kQStates = 4;
constexpr std::size_t kQActions = 27;
constexpr double kQRho[] = {0.65, 0.72, 0.80};
constexpr double kQPeFrac[] = {0.10, 0.15, 0.25};
constexpr double kQPmFrac[] = {0.10, 0.15, 0.20};

std::size_t stall_state(std::uint64_t stall) {
    if (stall == 0)
        return 0;
    if (stall <= 5)
        return 1;
    if (stall <= 20)
        return 2;
    return 3;
}

struct QAction {
    double rho;
    std::size_t p_e;
    std::size_t p_m;
};

QAction decode_q_action(std::size_t action, std::size_t p) {
    const double rho = kQRho[action / 9];
    const double pe_frac = kQPeFrac[(action / 3) % 3];
    const double pm_frac = kQPmFrac[action % 3];
    // Clamp the fractions into the population invariants: 2 p_e < p and
    // p_e + p_m < p, both at least 1.
    auto rounded = [](double x) { return static_cast<std::size_t>(std::llround(x)); };
    std::size_t p_e = std::clamp<std::size_t>(rounded(pe_frac * static_cast<double>(p)),
                                              1, (p - 1) / 2);
    std::size_t p_m = std::clamp<std::size_t>(rounded(pm_frac * static_cast<double>(p)),
                                              1, p - p_e - 1);
    return {rho, p_e, p_m};
}

// Reward: relative improvement of the incumbent, clamped to [0, 1].
double improvement_reward(double prev, double now, Sense sense) {
    const double delta = sense == Sense::MINIMIZE ? prev - now : now - prev;
    if (prev == 0.0)
        return delta > 0.0 ? 1.0 : 0.0;
    return std::clamp(delta / std::abs(prev), 0.0, 1.0);
}

RunResult run_single(RunConfig cfg, const Decoder& decoder) {
    const auto started = std::chrono::steady_clock::now();
    BrkgaConfig& ga = cfg.brkga;
    const std::size_t n = ga.n;

    RngStream conductor(cfg.seed, 0);
    std::vector<RngStream> island_rng;
    island_rng.reserve(ga.islands);
    for (std::size_t i = 0; i < ga.islands; ++i)
        island_rng.emplace_back(cfg.seed, 1 + i);

    std::vector<Population> islands;
    islands.reserve(ga.islands);
    for (std::size_t i = 0; i < ga.islands; ++i)
        islands.push_back(init_population(ga, decoder, {}, island_rng[i]));

    std::optional<Fitness> incumbent;
    Chromosome incumbent_keys;
    update_incumbent(islands, incumbent, incumbent_keys);
    const Sense sense = incumbent->senses[0];

    StallCounter trigger_stall;
    std::uint64_t gens_since_improvement = 0;

    QTable qtable(kQStates, kQActions, cfg.qparams);

    EvolveOptions options;
    options.threads = cfg.threads;
    if (cfg.elite_filter_min_dist > 0.0)
        options.elite_selector = [min_dist = cfg.elite_filter_min_dist](
                                     const std::vector<Individual>& members,
                                     std::size_t target) {
            return elite_diversity_filter(members, target, min_dist, mean_abs_distance);
        };

    RunTrace trace;
    trace.records.push_back({0, incumbent->values[0], mean_fitness(islands, 0),
                             mean_diversity(islands), "none"});

    std::uint64_t g = 0;
    std::string stop;
    while (stop.empty()) {
        ++g;

        // Parameter controller, applied before the generation evolves.
        std::size_t q_state = 0, q_action = 0;
        const double prev_best = incumbent->values[0];
        if (cfg.control == ControlKind::ABRKGA) {
            const ControlSnapshot snap = abrkga_tick(g, cfg.bounds);
            ga.p_e = snap.p_e;
            ga.p_m = snap.p_m;
            for (std::size_t i = 0; i < islands.size(); ++i) {
                islands[i].elite_size = snap.p_e;
                islands[i].mutant_size = snap.p_m;
                apply_population_resize(islands[i], snap.p, ga, decoder, island_rng[i]);
            }
            ga.p = snap.p;
            const auto limit = static_cast<std::size_t>(
                std::ceil(snap.alpha * static_cast<double>(ga.p_e)));
            options.elite_mating_limit = std::clamp(limit, ga.pi_e, ga.p_e);
        } else if (cfg.control == ControlKind::QLEARNING) {
            q_state = stall_state(trigger_stall.count());
            q_action = qtable.select_action(q_state, g, conductor);
            const QAction act = decode_q_action(q_action, ga.p);
            ga.p_e = act.p_e;
            ga.p_m = act.p_m;
            for (Population& pop : islands) {
                pop.elite_size = act.p_e;
                pop.mutant_size = act.p_m;
            }
            options.rho_override = act.rho;
        }

        for (std::size_t i = 0; i < islands.size(); ++i)
            islands[i] = evolve_generation(islands[i], ga, decoder, island_rng[i], options);

        bool migrated = false, ipr_ran = false, shaken = false, was_reset = false;

        if (ga.migration_interval > 0 && islands.size() > 1 &&
            g % ga.migration_interval == 0) {
            // A controller may have shrunk the elite sets below the
            // configured count; migrate what fits.
            std::size_t cap = ga.migration_count;
            for (const Population& pop : islands)
                cap = std::min(cap, pop.elite_size);
            if (cap > 0) {
                migrate(islands, cap);
                migrated = true;
            }
        }

        if (cfg.ipr_interval > 0 && g % cfg.ipr_interval == 0) {
            const DistanceFn metric =
                cfg.ipr_variant == IprVariant::INDICATOR
                    ? DistanceFn([](const Chromosome& a, const Chromosome& b) {
                          return hamming_theta_distance(a, b);
                      })
                    : DistanceFn(kendall_tau_distance);
            const auto pair = pick_ipr_pair(islands, cfg.ipr_min_distance, metric, conductor);
            if (pair) {
                const std::size_t block =
                    cfg.ipr_block_size > 0 ? cfg.ipr_block_size : std::max<std::size_t>(1, n / 5);
                const Individual winner = ipr(pair->base, pair->guide, cfg.ipr_variant, block,
                                              cfg.ipr_depth, decoder, n);
                ipr_ran = true;
                Population& home = islands[pair->base_island];
                Individual& worst_elite = home.members[home.elite_size - 1];
                if (better_than(*winner.fitness, *worst_elite.fitness)) {
                    worst_elite = winner;
                    sort_members(home);
                }
            }
        }

        bool improved = update_incumbent(islands, incumbent, incumbent_keys);
        trigger_stall.observe(best_across_islands(islands));

        if (cfg.stall_reset > 0 && trigger_stall.count() == cfg.stall_reset) {
            for (std::size_t i = 0; i < islands.size(); ++i)
                reset_population(islands[i], ga, decoder, island_rng[i]);
            trigger_stall.clear();
            was_reset = true;
        } else if (cfg.stall_shake > 0 && trigger_stall.count() > 0 &&
                   trigger_stall.count() % cfg.stall_shake == 0) {
            for (std::size_t i = 0; i < islands.size(); ++i) {
                const double beta =
                    ga.self_adaptive
                        ? self_adaptive_shake_intensity(islands[i].best().keys, n)
                        : cfg.shake_intensity;
                shake(islands[i], beta, ga, decoder, island_rng[i]);
            }
            shaken = true;
        }
        if (was_reset || shaken)
            improved = update_incumbent(islands, incumbent, incumbent_keys) || improved;

        gens_since_improvement = improved ? 0 : gens_since_improvement + 1;

        if (cfg.control == ControlKind::QLEARNING) {
            const double reward = improvement_reward(prev_best, incumbent->values[0], sense);
            qtable.update(q_state, q_action, reward, stall_state(trigger_stall.count()));
        }

        const char* event = was_reset   ? "reset"
                            : shaken    ? "shake"
                            : ipr_ran   ? "ipr"
                            : migrated  ? "migrate"
                                        : "none";
        trace.records.push_back({g, incumbent->values[0], mean_fitness(islands, 0),
                                 mean_diversity(islands), event});

        if (cfg.max_generations > 0 && g >= cfg.max_generations)
            stop = "max_generations";
        else if (cfg.max_stall > 0 && gens_since_improvement >= cfg.max_stall)
            stop = "max_stall";
        else if (cfg.wall_clock_seconds > 0.0 &&
                 elapsed_seconds(started) >= cfg.wall_clock_seconds)
            stop = "wall_clock";
    }

    trace.stop_reason = stop;

    RunResult result;
    result.best = *incumbent;
    result.best_keys = incumbent_keys;
    result.solution = decoder.solution(std::span<const double>(incumbent_keys.data(), n));
    result.trace = std::move(trace);
    result.generations = g;
    return result;
}

double aggregate_value(const Fitness& f, const std::vector<double>& weights) {
    return weighted_aggregate(f, weights).values[0];
}

// Smallest equal-weight aggregate over the archive; non-increasing over the
// run because entries are only ever displaced by entries that dominate them.
double archive_best_aggregate(const ParetoArchive& archive, const std::vector<double>& weights) {
    double best = std::numeric_limits<double>::infinity();
    for (const Individual& entry : archive.entries())
        best = std::min(best, aggregate_value(*entry.fitness, weights));
    return best;
}

RunResult run_pareto(RunConfig cfg, const Decoder& decoder) {
    const auto started = std::chrono::steady_clock::now();

    MpConfig mp;
    mp.base = cfg.brkga;
    mp.pi_islands = cfg.pi_islands;
    mp.pool_mix_interval = cfg.pool_mix_interval;
    mp.validate();

    MpState state = mp_init(mp, decoder, cfg.seed);

    const std::size_t m = decoder.num_objectives();
    const std::vector<double> weights(m, 1.0 / static_cast<double>(m));

    auto all_populations = [&state]() {
        std::vector<const Population*> pops;
        for (const Population& pop : state.omega)
            pops.push_back(&pop);
        for (const PiIsland& island : state.pi)
            pops.push_back(&island.pop);
        return pops;
    };
    auto mean_aggregate = [&]() {
        double sum = 0.0;
        std::size_t count = 0;
        for (const Population* pop : all_populations())
            for (const Individual& member : pop->members) {
                sum += aggregate_value(*member.fitness, weights);
                ++count;
            }
        return sum / static_cast<double>(count);
    };
    auto diversity = [&]() {
        double sum = 0.0;
        std::size_t count = 0;
        for (const Population* pop : all_populations()) {
            sum += population_diversity(*pop);
            ++count;
        }
        return sum / static_cast<double>(count);
    };

    double best_aggregate = archive_best_aggregate(state.archive, weights);
    std::uint64_t gens_since_improvement = 0;

    RunTrace trace;
    trace.records.push_back({0, best_aggregate, mean_aggregate(), diversity(), "none"});

    std::uint64_t g = 0;
    std::string stop;
    while (stop.empty()) {
        ++g;
        mp_brkga_generation(state, mp, decoder, cfg.threads);

        const bool mixed = mp.pool_mix_interval > 0 && state.pi.size() > 1 &&
                           g % mp.pool_mix_interval == 0;

        const double now = archive_best_aggregate(state.archive, weights);
        const bool improved = now < best_aggregate;
        best_aggregate = std::min(best_aggregate, now);
        gens_since_improvement = improved ? 0 : gens_since_improvement + 1;

        trace.records.push_back({g, best_aggregate, mean_aggregate(), diversity(),
                                 mixed ? "migrate" : "none"});

        if (cfg.max_generations > 0 && g >= cfg.max_generations)
            stop = "max_generations";
        else if (cfg.max_stall > 0 && gens_since_improvement >= cfg.max_stall)
            stop = "max_stall";
        else if (cfg.wall_clock_seconds > 0.0 &&
                 elapsed_seconds(started) >= cfg.wall_clock_seconds)
            stop = "wall_clock";
    }
    trace.stop_reason = stop;

    RunResult result;
    result.generations = g;
    result.trace = std::move(trace);

    const std::vector<std::size_t> order = state.archive.export_order();
    result.pareto.reserve(order.size());
    for (std::size_t index : order)
        result.pareto.push_back(state.archive.entries()[index]);

    // Representative single solution: the entry with the best aggregate,
    // first in export order on ties.
    const Individual* best_entry = nullptr;
    for (const Individual& entry : result.pareto)
        if (best_entry == nullptr ||
            aggregate_value(*entry.fitness, weights) <
                aggregate_value(*best_entry->fitness, weights))
            best_entry = &entry;
    result.best = *best_entry->fitness;
    result.best_keys = best_entry->keys;
    result.solution =
        decoder.solution(std::span<const double>(result.best_keys.data(), cfg.brkga.n));
    return result;
}

} // namespace

std::unique_ptr<Decoder> make_decoder(const ParsedInstance& instance) {
    switch (instance.kind) {
    case ProblemKind::TSP:
        if (!instance.tsp)
            throw std::invalid_argument("make_decoder: instance has no tsp payload");
        return std::make_unique<TspDecoder>(*instance.tsp);
    case ProblemKind::KNAPSACK:
        if (!instance.knapsack)
            throw std::invalid_argument("make_decoder: instance has no knapsack payload");
        return std::make_unique<KnapsackDecoder>(*instance.knapsack);
    case ProblemKind::SMTT:
        if (!instance.smtt)
            throw std::invalid_argument("make_decoder: instance has no smtt payload");
        return std::make_unique<SmttDecoder>(*instance.smtt);
    }
    throw std::invalid_argument("make_decoder: unknown problem kind");
}

std::unique_ptr<Decoder> make_pareto_decoder(const ParsedInstance& instance) {
    if (instance.kind != ProblemKind::KNAPSACK || !instance.bi_knapsack)
        throw std::invalid_argument(
            "make_pareto_decoder: pareto runs need a knapsack instance with a "
            "second value column");
    return std::make_unique<BiKnapsackDecoder>(*instance.bi_knapsack);
}

RunResult solve(const RunConfig& config, const ParsedInstance& instance) {
    RunConfig cfg = config;
    cfg.brkga.n = instance.n();
    cfg.validate();
    cfg.brkga.validate();
    const std::unique_ptr<Decoder> decoder = make_decoder(instance);
    return run_single(std::move(cfg), *decoder);
}

RunResult solve(const RunConfig& config) {
    return solve(config, parse_instance_file(config.instance_path, config.problem));
}

RunResult solve_pareto(const RunConfig& config, const ParsedInstance& instance) {
    RunConfig cfg = config;
    cfg.brkga.n = instance.n();
    cfg.validate();
    cfg.brkga.validate();
    const std::unique_ptr<Decoder> decoder = make_pareto_decoder(instance);
    return run_pareto(std::move(cfg), *decoder);
}

RunResult solve_pareto(const RunConfig& config) {
    return solve_pareto(config, parse_instance_file(config.instance_path, config.problem));
}

void write_report(const RunResult& result, const RunConfig& config) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + config.out_dir + ": " + ec.message());
    const fs::path dir(config.out_dir);

    {
        const fs::path path = dir / config.trace_file;
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot write " + path.string());
        write_trace_csv(result.trace, out);
        if (!out)
            throw IoError("write failed on " + path.string());
    }

    if (!result.pareto.empty()) {
        const fs::path path = dir / config.pareto_file;
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot write " + path.string());
        for (const Individual& entry : result.pareto) {
            for (std::size_t k = 0; k < entry.fitness->values.size(); ++k) {
                if (k > 0)
                    out << '\t';
                out << format_sig9(entry.fitness->values[k]);
            }
            out << '\n';
        }
        if (!out)
            throw IoError("write failed on " + path.string());
    } else {
        const fs::path path = dir / config.solution_file;
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot write " + path.string());
        for (std::size_t k = 0; k < result.best.values.size(); ++k) {
            if (k > 0)
                out << ' ';
            out << format_sig9(result.best.values[k]);
        }
        out << '\n';
        for (std::size_t i = 0; i < result.solution.size(); ++i) {
            if (i > 0)
                out << ' ';
            out << result.solution[i];
        }
        out << '\n';
        if (!out)
            throw IoError("write failed on " + path.string());
    }
}

SweepResult run_sweep(const RunConfig& base, const ParsedInstance& instance,
                      const SweepGrid& grid) {
    for (const std::string& key : grid.keys)
        if (key == "instance" || key == "problem")
            throw ParseError("sweep grids cannot change the '" + key + "' key");

    SweepResult sweep;
    sweep.keys = grid.keys;

    std::vector<std::size_t> index(grid.keys.size(), 0);
    while (true) {
        RunConfig cfg = base;
        std::vector<std::string> values;
        values.reserve(grid.keys.size());
        for (std::size_t k = 0; k < grid.keys.size(); ++k) {
            const std::string& value = grid.values[k][index[k]];
            apply_config_override(cfg, grid.keys[k], value);
            values.push_back(value);
        }
        const RunResult run = solve(cfg, instance);
        sweep.rows.push_back({std::move(values), run.best});

        // Row-major odometer: the last key varies fastest.
        std::size_t k = grid.keys.size();
        while (k > 0) {
            --k;
            if (++index[k] < grid.values[k].size())
                break;
            index[k] = 0;
            if (k == 0)
                return sweep;
        }
    }
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
    for (const std::string& key : sweep.keys)
        out << key << ',';
    out << "best\n";
    for (const SweepRow& row : sweep.rows) {
        for (const std::string& value : row.values)
            out << value << ',';
        out << format_sig9(row.best.values[0]) << '\n';
    }
}

} // namespace brkga
