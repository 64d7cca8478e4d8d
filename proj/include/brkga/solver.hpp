#ifndef BRKGA_SOLVER_HPP_
#define BRKGA_SOLVER_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "brkga/core.hpp"
#include "brkga/io.hpp"
#include "brkga/mo.hpp"

namespace brkga {

/// Outcome of one experiment run.
struct RunResult {
    Fitness best;                       ///< best fitness found over the run
    Chromosome best_keys;               ///< chromosome that produced it
    std::vector<std::size_t> solution;  ///< its decoded solution indices
    RunTrace trace;
    std::uint64_t generations = 0;      ///< generations actually evolved

    /// Non-dominated set of a pareto run; empty for single-objective runs.
    std::vector<Individual> pareto;
};

/// Single-objective decoder for a parsed instance. Throws
/// std::invalid_argument when the payload is missing.
std::unique_ptr<Decoder> make_decoder(const ParsedInstance& instance);

/// Two-objective decoder; the instance must carry a second value column.
std::unique_ptr<Decoder> make_pareto_decoder(const ParsedInstance& instance);

/**
 * Runs one single-objective experiment: seeded island evolution with the
 * configured controller, migration, path relinking and stall triggers, and
 * one trace record per generation (plus one for the initial population).
 * The trace's best column is the run-level incumbent, so it is monotone
 * even across population resets. config.brkga.n is taken from the instance.
 */
RunResult solve(const RunConfig& config, const ParsedInstance& instance);

/// Loads the instance from config.instance_path, then runs.
RunResult solve(const RunConfig& config);

/**
 * Runs one multi-objective experiment on the two-objective decoder: one
 * single-objective island per objective plus config.pi_islands
 * multi-objective islands, with pool mixing traced as migration events.
 * The trace's best column is the smallest equal-weight aggregate over the
 * non-dominated archive (monotone); mean is the population average of the
 * same aggregate. RunResult.best/solution refer to the archive entry with
 * the best aggregate; RunResult.pareto holds the whole archive in export
 * order.
 */
RunResult solve_pareto(const RunConfig& config, const ParsedInstance& instance);
RunResult solve_pareto(const RunConfig& config);

/**
 * Writes the run's report files into config.out_dir (created when missing):
 * the trace CSV, then either the solution file (fitness line, then the
 * solution indices) or, for a pareto run, the non-dominated set as TSV.
 * Throws IoError when a file cannot be written.
 */
void write_report(const RunResult& result, const RunConfig& config);

/// One sweep cell: the grid values it was run with and the best fitness.
struct SweepRow {
    std::vector<std::string> values;
    Fitness best;
};

/// All sweep cells, in row-major grid order.
struct SweepResult {
    std::vector<std::string> keys;
    std::vector<SweepRow> rows;
};

/**
 * Runs the full cartesian product of the grid over the base config, one
 * run per cell, every cell with the base config's seed. Grid keys must be
 * run-config keys and must not change the problem or instance. Throws
 * ParseError on bad keys or values.
 */
SweepResult run_sweep(const RunConfig& base, const ParsedInstance& instance,
                      const SweepGrid& grid);

/// CSV: one column per grid key plus "best", 9 significant digits.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

} // namespace brkga

#endif // BRKGA_SOLVER_HPP_
