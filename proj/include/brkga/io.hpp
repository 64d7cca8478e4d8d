#ifndef BRKGA_IO_HPP_
#define BRKGA_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brkga/control.hpp"
#include "brkga/core.hpp"
#include "brkga/decoders.hpp"
#include "brkga/ipr.hpp"

namespace brkga {

/// Malformed file content (bad syntax, bad values, violated format rules).
/// Messages name the file and the offending line. CLI exit code 1.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure: file cannot be opened, read or written.
/// CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { TSP, KNAPSACK, SMTT };

/// One parsed problem instance. Exactly one payload is set, matching kind;
/// a knapsack file with a second value column fills bi_knapsack as well.
struct ParsedInstance {
    ProblemKind kind = ProblemKind::TSP;
    std::optional<TspInstance> tsp;
    std::optional<KnapsackInstance> knapsack;
    std::optional<BiKnapsackInstance> bi_knapsack;
    std::optional<SmttInstance> smtt;

    std::size_t n() const;
};

/**
 * Parses a problem instance. Lines may carry '#' comments; blank lines are
 * skipped. Formats:
 *
 *   TSP:       n, then the keyword MATRIX followed by n rows of n distances,
 *              or the keyword COORDS followed by n "x y" rows (Euclidean
 *              lengths rounded half-up to integers).
 *   KNAPSACK:  "n capacity", then n rows "weight value" (optionally a
 *              second value column, making the instance bi-objective).
 *   SMTT:      n, then n rows "ptime due".
 *
 * Throws ParseError naming the offending line, IoError when the file cannot
 * be read.
 */
ParsedInstance parse_instance(std::istream& in, ProblemKind kind, const std::string& name);
ParsedInstance parse_instance_file(const std::string& path, ProblemKind kind);

/// Online parameter controller selection.
enum class ControlKind { NONE, ABRKGA, QLEARNING };

/**
 * Everything one experiment run needs: problem and instance, evolution
 * parameters, stopping rules, trigger thresholds, controller settings and
 * output locations. Built from a config file plus command-line overrides.
 */
struct RunConfig {
    ProblemKind problem = ProblemKind::TSP;
    std::string instance_path;
    BrkgaConfig brkga; ///< brkga.n is filled from the instance when loaded

    std::uint64_t seed = 0;

    // Stopping rules; 0 disables each. At least one must be enabled.
    std::uint64_t max_generations = 0;
    std::uint64_t max_stall = 0;
    double wall_clock_seconds = 0.0;

    // Stall-triggered diversity events; 0 disables each.
    std::uint64_t stall_shake = 0;
    std::uint64_t stall_reset = 0;
    double shake_intensity = 0.2;

    /// Elite diversity filter threshold; 0 disables the filter.
    double elite_filter_min_dist = 0.0;

    // Periodic path relinking; interval 0 disables it.
    std::uint64_t ipr_interval = 0;
    double ipr_min_distance = 0.0;
    IprVariant ipr_variant = IprVariant::INDICATOR;
    std::size_t ipr_block_size = 0; ///< 0 = auto (max(1, n / 5))
    double ipr_depth = 1.0;

    ControlKind control = ControlKind::NONE;
    ScheduleBounds bounds; ///< required when control = ABRKGA
    QParams qparams;

    // Multi-objective (pareto command) settings.
    std::size_t pi_islands = 1;
    std::size_t pool_mix_interval = 10;

    std::string out_dir = ".";
    std::string trace_file = "trace.csv";
    std::string solution_file = "solution.txt";
    std::string pareto_file = "pareto.tsv";
    bool quiet = false;

    unsigned threads = 1;

    /// Cross-field rules (at least one stopping rule, islands for IPR, ...).
    /// Throws std::invalid_argument. brkga.validate() is checked separately
    /// once n is known.
    void validate() const;
};

/**
 * Parses a run configuration: flat "key = value" lines, case-insensitive
 * keys, '#' comments, and cosmetic [section] headers. Unknown keys are
 * ParseErrors naming the line. CLI flags are applied on top by the caller
 * via apply_config_override.
 */
RunConfig parse_run_config(std::istream& in, const std::string& name);
RunConfig parse_run_config_file(const std::string& path);

/// Applies one "key = value" override (same keys as the config file).
/// Throws ParseError on unknown keys or unparseable values.
void apply_config_override(RunConfig& config, const std::string& key,
                           const std::string& value);

/// One row of the per-generation trace.
struct TraceRecord {
    std::uint64_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double diversity = 0.0;
    std::string event = "none"; ///< none | shake | reset | migrate | ipr
};

/// Full trace of a run plus why it stopped.
struct RunTrace {
    std::vector<TraceRecord> records;
    std::string stop_reason; ///< max_generations | max_stall | wall_clock
};

/// CSV with header "generation,best,mean,diversity,event", '.' decimal
/// separator, 9 significant digits.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

/// Parameter sweep grid: one config key mapped to the values it sweeps.
struct SweepGrid {
    std::vector<std::string> keys;
    std::vector<std::vector<std::string>> values; ///< aligned with keys
};

/// Parses a grid file: "key = v1, v2, v3" lines (commas or whitespace),
/// '#' comments. Throws ParseError on bad lines or duplicate keys.
SweepGrid parse_sweep_grid(std::istream& in, const std::string& name);
SweepGrid parse_sweep_grid_file(const std::string& path);

} // namespace brkga

#endif // BRKGA_IO_HPP_
