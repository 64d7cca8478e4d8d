// Command-line experiment runner: solve, sweep and pareto subcommands over
// the run-configuration format of the library's io layer.
//
// Exit codes: 0 success, 1 bad content (config, instance, command line),
// 2 filesystem failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "brkga/solver.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> instance;
    std::optional<std::string> problem;
    std::optional<std::string> out_dir;
    bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("-c,--config", flags.config_path, "run configuration file");
    cmd->add_option("-s,--set", flags.overrides,
                    "override one config key (key=value), repeatable");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--instance", flags.instance, "instance file");
    cmd->add_option("--problem", flags.problem, "problem kind: tsp, knapsack or smtt");
    cmd->add_option("--out-dir", flags.out_dir, "directory the report files go to");
    cmd->add_flag("-q,--quiet", flags.quiet, "suppress the summary on success");
}

brkga::RunConfig load_config(const CommonFlags& flags) {
    brkga::RunConfig cfg;
    if (!flags.config_path.empty())
        cfg = brkga::parse_run_config_file(flags.config_path);
    for (const std::string& setting : flags.overrides) {
        const auto eq = setting.find('=');
        if (eq == std::string::npos)
            throw brkga::ParseError("--set expects key=value, got '" + setting + "'");
        brkga::apply_config_override(cfg, setting.substr(0, eq), setting.substr(eq + 1));
    }
    if (flags.problem)
        brkga::apply_config_override(cfg, "problem", *flags.problem);
    if (flags.instance)
        cfg.instance_path = *flags.instance;
    if (flags.seed)
        cfg.seed = *flags.seed;
    if (flags.out_dir)
        cfg.out_dir = *flags.out_dir;
    if (flags.quiet)
        cfg.quiet = true;

    if (const char* env = std::getenv("BRKGA_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end == nullptr || *end != '\0' || value == 0)
            throw brkga::ParseError(std::string("BRKGA_THREADS: expected a positive "
                                                "integer, got '") +
                                    env + "'");
        cfg.threads = static_cast<unsigned>(value);
    }
    return cfg;
}

std::string fitness_line(const brkga::Fitness& fitness) {
    std::string line;
    for (std::size_t k = 0; k < fitness.values.size(); ++k) {
        if (k > 0)
            line += ' ';
        line += brkga::format_sig9(fitness.values[k]);
    }
    return line;
}

int cmd_solve(const CommonFlags& flags) {
    const brkga::RunConfig cfg = load_config(flags);
    const brkga::RunResult result = brkga::solve(cfg);
    brkga::write_report(result, cfg);
    if (!cfg.quiet) {
        std::cout << "best " << fitness_line(result.best) << '\n'
                  << "generations " << result.generations << '\n'
                  << "stop " << result.trace.stop_reason << '\n';
    }
    return 0;
}

int cmd_pareto(const CommonFlags& flags) {
    const brkga::RunConfig cfg = load_config(flags);
    const brkga::RunResult result = brkga::solve_pareto(cfg);
    brkga::write_report(result, cfg);
    if (!cfg.quiet) {
        std::cout << "front_size " << result.pareto.size() << '\n'
                  << "generations " << result.generations << '\n'
                  << "stop " << result.trace.stop_reason << '\n';
    }
    return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& grid_path) {
    const brkga::RunConfig cfg = load_config(flags);
    const brkga::SweepGrid grid = brkga::parse_sweep_grid_file(grid_path);
    const brkga::ParsedInstance instance =
        brkga::parse_instance_file(cfg.instance_path, cfg.problem);
    const brkga::SweepResult sweep = brkga::run_sweep(cfg, instance, grid);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw brkga::IoError("cannot create output directory " + cfg.out_dir + ": " +
                             ec.message());
    const fs::path path = fs::path(cfg.out_dir) / "sweep.csv";
    std::ofstream out(path);
    if (!out)
        throw brkga::IoError("cannot write " + path.string());
    brkga::write_sweep_csv(sweep, out);
    if (!out)
        throw brkga::IoError("write failed on " + path.string());

    if (!cfg.quiet)
        std::cout << "cells " << sweep.rows.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-key genetic algorithm experiment runner"};
    app.require_subcommand(1);

    CommonFlags solve_flags;
    CLI::App* solve_cmd = app.add_subcommand("solve", "run one single-objective experiment");
    add_common_flags(solve_cmd, solve_flags);

    CommonFlags sweep_flags;
    std::string grid_path;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid");
    add_common_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("-g,--grid", grid_path, "sweep grid file")->required();

    CommonFlags pareto_flags;
    CLI::App* pareto_cmd =
        app.add_subcommand("pareto", "run one two-objective experiment");
    add_common_flags(pareto_cmd, pareto_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(solve_flags);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_flags, grid_path);
        if (pareto_cmd->parsed())
            return cmd_pareto(pareto_flags);
    } catch (const brkga::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
