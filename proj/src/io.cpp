#include "brkga/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

namespace brkga {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream stream(s);
    std::string token;
    while (stream >> token)
        tokens.push_back(token);
    return tokens;
}

// Reads lines, strips '#' comments, skips blanks, tracks line numbers.
class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_no_;
            const auto hash = raw.find('#');
            if (hash != std::string::npos)
                raw.erase(hash);
            raw = trim(raw);
            if (!raw.empty()) {
                out = raw;
                return true;
            }
        }
        return false;
    }

    std::size_t line_no() const { return line_no_; }
    const std::string& name() const { return name_; }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(name_ + ":" + std::to_string(line_no_) + ": " + message);
    }

    [[noreturn]] void fail_eof(const std::string& message) const {
        throw ParseError(name_ + ": unexpected end of file: " + message);
    }

private:
    std::istream& in_;
    std::string name_;
    std::size_t line_no_ = 0;
};

double parse_real(const LineReader& reader, const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        reader.fail("not a number: '" + token + "'");
    }
    if (used != token.size())
        reader.fail("not a number: '" + token + "'");
    return value;
}

std::uint64_t parse_count(const LineReader& reader, const std::string& token) {
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
        if (!token.empty() && token[0] == '-')
            reader.fail("expected a non-negative integer, got '" + token + "'");
        value = std::stoull(token, &used);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        reader.fail("expected a non-negative integer, got '" + token + "'");
    }
    if (used != token.size())
        reader.fail("expected a non-negative integer, got '" + token + "'");
    return value;
}

TspInstance parse_tsp(LineReader& reader) {
    std::string line;
    if (!reader.next(line))
        reader.fail_eof("expected the city count");
    const std::vector<std::string> head = split_ws(line);
    if (head.size() != 1)
        reader.fail("expected a single city count");
    const std::size_t n = static_cast<std::size_t>(parse_count(reader, head[0]));

    if (!reader.next(line))
        reader.fail_eof("expected MATRIX or COORDS");
    const std::string keyword = lower(trim(line));

    if (keyword == "matrix") {
        TspInstance instance;
        instance.n = n;
        instance.dist.reserve(n * n);
        for (std::size_t row = 0; row < n; ++row) {
            if (!reader.next(line))
                reader.fail_eof("expected " + std::to_string(n) + " matrix rows");
            const std::vector<std::string> tokens = split_ws(line);
            if (tokens.size() != n)
                reader.fail("expected " + std::to_string(n) + " distances in this row");
            for (const std::string& token : tokens)
                instance.dist.push_back(parse_real(reader, token));
        }
        try {
            instance.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(reader.name() + ": " + e.what());
        }
        return instance;
    }
    if (keyword == "coords") {
        std::vector<std::pair<double, double>> coords;
        coords.reserve(n);
        for (std::size_t row = 0; row < n; ++row) {
            if (!reader.next(line))
                reader.fail_eof("expected " + std::to_string(n) + " coordinate rows");
            const std::vector<std::string> tokens = split_ws(line);
            if (tokens.size() != 2)
                reader.fail("expected 'x y'");
            coords.emplace_back(parse_real(reader, tokens[0]), parse_real(reader, tokens[1]));
        }
        TspInstance instance = TspInstance::from_coords(coords);
        try {
            instance.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(reader.name() + ": " + e.what());
        }
        return instance;
    }
    reader.fail("expected MATRIX or COORDS, got '" + line + "'");
}

void parse_knapsack(LineReader& reader, ParsedInstance& out) {
    std::string line;
    if (!reader.next(line))
        reader.fail_eof("expected 'n capacity'");
    const std::vector<std::string> head = split_ws(line);
    if (head.size() != 2)
        reader.fail("expected 'n capacity'");
    const std::size_t n = static_cast<std::size_t>(parse_count(reader, head[0]));
    const double capacity = parse_real(reader, head[1]);

    KnapsackInstance plain;
    plain.n = n;
    plain.capacity = capacity;
    BiKnapsackInstance bi;
    bi.n = n;
    bi.capacity = capacity;

    std::size_t columns = 0;
    for (std::size_t row = 0; row < n; ++row) {
        if (!reader.next(line))
            reader.fail_eof("expected " + std::to_string(n) + " item rows");
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 2 && tokens.size() != 3)
            reader.fail("expected 'weight value' or 'weight value value2'");
        if (columns == 0)
            columns = tokens.size();
        else if (tokens.size() != columns)
            reader.fail("item rows mix two and three columns");
        const double weight = parse_real(reader, tokens[0]);
        const double value = parse_real(reader, tokens[1]);
        plain.weight.push_back(weight);
        plain.value.push_back(value);
        if (columns == 3) {
            bi.weight.push_back(weight);
            bi.value_a.push_back(value);
            bi.value_b.push_back(parse_real(reader, tokens[2]));
        }
    }
    try {
        plain.validate();
        if (columns == 3)
            bi.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(reader.name() + ": " + e.what());
    }
    out.knapsack = std::move(plain);
    if (columns == 3)
        out.bi_knapsack = std::move(bi);
}

SmttInstance parse_smtt(LineReader& reader) {
    std::string line;
    if (!reader.next(line))
        reader.fail_eof("expected the job count");
    const std::vector<std::string> head = split_ws(line);
    if (head.size() != 1)
        reader.fail("expected a single job count");
    SmttInstance instance;
    instance.n = static_cast<std::size_t>(parse_count(reader, head[0]));
    for (std::size_t row = 0; row < instance.n; ++row) {
        if (!reader.next(line))
            reader.fail_eof("expected " + std::to_string(instance.n) + " job rows");
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 2)
            reader.fail("expected 'ptime due'");
        instance.ptime.push_back(parse_real(reader, tokens[0]));
        instance.due.push_back(parse_real(reader, tokens[1]));
    }
    try {
        instance.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(reader.name() + ": " + e.what());
    }
    return instance;
}

bool parse_flag(const std::string& value) {
    const std::string v = lower(trim(value));
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ParseError("not a boolean: '" + value + "'");
}

double parse_real_value(const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + value + "'");
    }
    if (used != value.size())
        throw ParseError("not a number: '" + value + "'");
    return out;
}

std::uint64_t parse_count_value(const std::string& value) {
    std::size_t used = 0;
    std::uint64_t out = 0;
    try {
        if (!value.empty() && value[0] == '-')
            throw std::invalid_argument(value);
        out = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ParseError("expected a non-negative integer, got '" + value + "'");
    }
    if (used != value.size())
        throw ParseError("expected a non-negative integer, got '" + value + "'");
    return out;
}

ProblemKind parse_problem(const std::string& value) {
    const std::string v = lower(trim(value));
    if (v == "tsp")
        return ProblemKind::TSP;
    if (v == "knapsack")
        return ProblemKind::KNAPSACK;
    if (v == "smtt")
        return ProblemKind::SMTT;
    throw ParseError("unknown problem kind: '" + value + "'");
}

BiasFunction parse_bias(const std::string& value) {
    const std::string v = lower(trim(value));
    if (v == "constant")
        return BiasFunction::CONSTANT;
    if (v == "linear")
        return BiasFunction::LINEAR;
    if (v == "loginverse")
        return BiasFunction::LOGINVERSE;
    if (v == "quadratic")
        return BiasFunction::QUADRATIC;
    if (v == "exponential")
        return BiasFunction::EXPONENTIAL;
    throw ParseError("unknown bias function: '" + value + "'");
}

} // namespace

std::size_t ParsedInstance::n() const {
    switch (kind) {
    case ProblemKind::TSP:
        return tsp ? tsp->n : 0;
    case ProblemKind::KNAPSACK:
        return knapsack ? knapsack->n : 0;
    case ProblemKind::SMTT:
        return smtt ? smtt->n : 0;
    }
    return 0;
}

ParsedInstance parse_instance(std::istream& in, ProblemKind kind, const std::string& name) {
    LineReader reader(in, name);
    ParsedInstance out;
    out.kind = kind;
    switch (kind) {
    case ProblemKind::TSP:
        out.tsp = parse_tsp(reader);
        break;
    case ProblemKind::KNAPSACK:
        parse_knapsack(reader, out);
        break;
    case ProblemKind::SMTT:
        out.smtt = parse_smtt(reader);
        break;
    }
    std::string extra;
    if (reader.next(extra))
        reader.fail("unexpected trailing content: '" + extra + "'");
    return out;
}

ParsedInstance parse_instance_file(const std::string& path, ProblemKind kind) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open instance file: " + path);
    return parse_instance(in, kind, path);
}

void apply_config_override(RunConfig& config, const std::string& raw_key,
                           const std::string& raw_value) {
    const std::string key = lower(trim(raw_key));
    const std::string value = trim(raw_value);
    if (key.empty())
        throw ParseError("empty config key");
    if (value.empty())
        throw ParseError("empty value for key '" + key + "'");

    try {
        if (key == "problem") {
            config.problem = parse_problem(value);
        } else if (key == "instance") {
            config.instance_path = value;
        } else if (key == "seed") {
            config.seed = parse_count_value(value);
        } else if (key == "p") {
            config.brkga.p = parse_count_value(value);
        } else if (key == "p_e") {
            config.brkga.p_e = parse_count_value(value);
        } else if (key == "p_m") {
            config.brkga.p_m = parse_count_value(value);
        } else if (key == "rho") {
            config.brkga.rho = parse_real_value(value);
        } else if (key == "pi_t") {
            config.brkga.pi_t = parse_count_value(value);
        } else if (key == "pi_e") {
            config.brkga.pi_e = parse_count_value(value);
        } else if (key == "bias") {
            config.brkga.bias = parse_bias(value);
        } else if (key == "second_parent_pool") {
            const std::string v = lower(value);
            if (v == "non_elite")
                config.brkga.second_parent_pool = ParentPool::NON_ELITE;
            else if (v == "entire")
                config.brkga.second_parent_pool = ParentPool::ENTIRE;
            else
                throw ParseError("unknown parent pool: '" + value + "'");
        } else if (key == "islands") {
            config.brkga.islands = parse_count_value(value);
        } else if (key == "migration_interval") {
            config.brkga.migration_interval = parse_count_value(value);
        } else if (key == "migration_count") {
            config.brkga.migration_count = parse_count_value(value);
        } else if (key == "self_adaptive") {
            config.brkga.self_adaptive = parse_flag(value);
        } else if (key == "max_generations") {
            config.max_generations = parse_count_value(value);
        } else if (key == "max_stall") {
            config.max_stall = parse_count_value(value);
        } else if (key == "wall_clock_seconds") {
            config.wall_clock_seconds = parse_real_value(value);
        } else if (key == "stall_shake") {
            config.stall_shake = parse_count_value(value);
        } else if (key == "stall_reset") {
            config.stall_reset = parse_count_value(value);
        } else if (key == "shake_intensity") {
            config.shake_intensity = parse_real_value(value);
        } else if (key == "elite_filter_min_dist") {
            config.elite_filter_min_dist = parse_real_value(value);
        } else if (key == "ipr_interval") {
            config.ipr_interval = parse_count_value(value);
        } else if (key == "ipr_min_distance") {
            config.ipr_min_distance = parse_real_value(value);
        } else if (key == "ipr_variant") {
            const std::string v = lower(value);
            if (v == "indicator")
                config.ipr_variant = IprVariant::INDICATOR;
            else if (v == "permutation")
                config.ipr_variant = IprVariant::PERMUTATION;
            else
                throw ParseError("unknown ipr variant: '" + value + "'");
        } else if (key == "ipr_block_size") {
            config.ipr_block_size = parse_count_value(value);
        } else if (key == "ipr_depth") {
            config.ipr_depth = parse_real_value(value);
        } else if (key == "control") {
            const std::string v = lower(value);
            if (v == "none")
                config.control = ControlKind::NONE;
            else if (v == "abrkga")
                config.control = ControlKind::ABRKGA;
            else if (v == "qlearning")
                config.control = ControlKind::QLEARNING;
            else
                throw ParseError("unknown control kind: '" + value + "'");
        } else if (key == "p_max") {
            config.bounds.p_max = parse_count_value(value);
        } else if (key == "p_min") {
            config.bounds.p_min = parse_count_value(value);
        } else if (key == "pe_min") {
            config.bounds.pe_min = parse_count_value(value);
        } else if (key == "pe_max") {
            config.bounds.pe_max = parse_count_value(value);
        } else if (key == "pm_max") {
            config.bounds.pm_max = parse_count_value(value);
        } else if (key == "pm_min") {
            config.bounds.pm_min = parse_count_value(value);
        } else if (key == "alpha_max") {
            config.bounds.alpha_max = parse_real_value(value);
        } else if (key == "alpha_min") {
            config.bounds.alpha_min = parse_real_value(value);
        } else if (key == "g_max") {
            config.bounds.g_max = parse_count_value(value);
        } else if (key == "q_learning_rate") {
            config.qparams.learning_rate = parse_real_value(value);
        } else if (key == "q_discount") {
            config.qparams.discount = parse_real_value(value);
        } else if (key == "q_eta0") {
            config.qparams.eta0 = parse_real_value(value);
        } else if (key == "q_lambda") {
            config.qparams.lambda = parse_real_value(value);
        } else if (key == "pi_islands") {
            config.pi_islands = parse_count_value(value);
        } else if (key == "pool_mix_interval") {
            config.pool_mix_interval = parse_count_value(value);
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "trace_file") {
            config.trace_file = value;
        } else if (key == "solution_file") {
            config.solution_file = value;
        } else if (key == "pareto_file") {
            config.pareto_file = value;
        } else if (key == "quiet") {
            config.quiet = parse_flag(value);
        } else if (key == "threads") {
            config.threads = static_cast<unsigned>(parse_count_value(value));
        } else {
            throw ParseError("unknown config key: '" + key + "'");
        }
    } catch (const ParseError& e) {
        throw ParseError("key '" + key + "': " + e.what());
    }
}

RunConfig parse_run_config(std::istream& in, const std::string& name) {
    RunConfig config;
    LineReader reader(in, name);
    std::string line;
    while (reader.next(line)) {
        if (line.front() == '[') {
            if (line.back() != ']')
                reader.fail("malformed section header: '" + line + "'");
            continue; // sections are cosmetic; keys are globally unique
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            reader.fail("expected 'key = value', got '" + line + "'");
        try {
            apply_config_override(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ParseError& e) {
            reader.fail(e.what());
        }
    }
    return config;
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    return parse_run_config(in, path);
}

void RunConfig::validate() const {
    if (instance_path.empty())
        throw std::invalid_argument("RunConfig: no instance file configured");
    if (max_generations == 0 && max_stall == 0 && !(wall_clock_seconds > 0.0))
        throw std::invalid_argument("RunConfig: at least one stopping rule must be set");
    if (ipr_interval > 0 && brkga.islands < 2)
        throw std::invalid_argument("RunConfig: path relinking requires at least two islands");
    if (!(ipr_depth > 0.0) || ipr_depth > 1.0)
        throw std::invalid_argument("RunConfig: ipr_depth must lie in (0, 1]");
    if (!(shake_intensity >= 0.0) || shake_intensity > 1.0)
        throw std::invalid_argument("RunConfig: shake_intensity must lie in [0, 1]");
    if (elite_filter_min_dist < 0.0)
        throw std::invalid_argument("RunConfig: elite_filter_min_dist must be >= 0");
    if (control == ControlKind::ABRKGA)
        bounds.validate();
    if (control == ControlKind::QLEARNING && brkga.self_adaptive)
        throw std::invalid_argument(
            "RunConfig: the Q-learning controller and self-adaptive bias both set rho; "
            "enable only one");
    if (threads < 1)
        throw std::invalid_argument("RunConfig: threads must be at least 1");
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    out << "generation,best,mean,diversity,event\n";
    for (const TraceRecord& record : trace.records)
        out << record.generation << ',' << format_sig9(record.best) << ','
            << format_sig9(record.mean) << ',' << format_sig9(record.diversity) << ','
            << record.event << '\n';
}

SweepGrid parse_sweep_grid(std::istream& in, const std::string& name) {
    SweepGrid grid;
    LineReader reader(in, name);
    std::string line;
    while (reader.next(line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            reader.fail("expected 'key = v1, v2, ...', got '" + line + "'");
        const std::string key = lower(trim(line.substr(0, eq)));
        if (key.empty())
            reader.fail("empty grid key");
        if (std::find(grid.keys.begin(), grid.keys.end(), key) != grid.keys.end())
            reader.fail("duplicate grid key: '" + key + "'");
        std::string rest = line.substr(eq + 1);
        std::replace(rest.begin(), rest.end(), ',', ' ');
        const std::vector<std::string> values = split_ws(rest);
        if (values.empty())
            reader.fail("no values for grid key: '" + key + "'");
        grid.keys.push_back(key);
        grid.values.push_back(values);
    }
    if (grid.keys.empty())
        throw ParseError(name + ": empty sweep grid");
    return grid;
}

SweepGrid parse_sweep_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open grid file: " + path);
    return parse_sweep_grid(in, path);
}

} // namespace brkga
