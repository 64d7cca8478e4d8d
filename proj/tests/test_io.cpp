#include "doctest.h"

#include <stdexcept>

#include <sstream>
#include <string>

#include "brkga/io.hpp"

using namespace brkga;

namespace {

ParsedInstance parse_str(const std::string& text, ProblemKind kind) {
    std::istringstream in(text);
    return parse_instance(in, kind, "test");
}

RunConfig config_str(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in, "test");
}

} // namespace

TEST_CASE("tsp matrix instances parse with comments and blanks") {
    const auto parsed = parse_str("# a triangle\n"
                                  "3\n"
                                  "MATRIX\n"
                                  "\n"
                                  "0 1 2   # row one\n"
                                  "1 0 3\n"
                                  "2 3 0\n",
                                  ProblemKind::TSP);
    REQUIRE(parsed.tsp.has_value());
    CHECK(parsed.n() == 3);
    CHECK(parsed.tsp->at(1, 2) == 3.0);
    CHECK_FALSE(parsed.knapsack.has_value());
}

TEST_CASE("tsp coordinate instances compute rounded euclidean distances") {
    const auto parsed = parse_str("3\n"
                                  "coords\n"
                                  "0 0\n"
                                  "3 0\n"
                                  "3 4\n",
                                  ProblemKind::TSP);
    REQUIRE(parsed.tsp.has_value());
    CHECK(parsed.tsp->at(0, 1) == 3.0);
    CHECK(parsed.tsp->at(0, 2) == 5.0);
    CHECK(parsed.tsp->at(1, 2) == 4.0);
}

TEST_CASE("malformed tsp content names the offending line") {
    SUBCASE("asymmetric matrix") {
        CHECK_THROWS_AS(parse_str("2\nMATRIX\n0 1\n2 0\n", ProblemKind::TSP),
                        ParseError);
    }
    SUBCASE("short row") {
        try {
            parse_str("3\nMATRIX\n0 1 2\n1 0\n2 3 0\n", ProblemKind::TSP);
            FAIL("expected a ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("test:4") != std::string::npos);
        }
    }
    SUBCASE("bad number") {
        CHECK_THROWS_AS(parse_str("2\nMATRIX\n0 x\nx 0\n", ProblemKind::TSP),
                        ParseError);
    }
    SUBCASE("missing keyword") {
        CHECK_THROWS_AS(parse_str("2\n0 1\n1 0\n", ProblemKind::TSP), ParseError);
    }
    SUBCASE("truncated file") {
        CHECK_THROWS_AS(parse_str("3\nMATRIX\n0 1 2\n", ProblemKind::TSP), ParseError);
    }
    SUBCASE("trailing content") {
        CHECK_THROWS_AS(parse_str("2\nMATRIX\n0 1\n1 0\nextra\n", ProblemKind::TSP),
                        ParseError);
    }
}

TEST_CASE("knapsack instances parse two or three value columns") {
    const auto plain = parse_str("3 10\n2 5\n3 4\n4 6\n", ProblemKind::KNAPSACK);
    REQUIRE(plain.knapsack.has_value());
    CHECK_FALSE(plain.bi_knapsack.has_value());
    CHECK(plain.knapsack->capacity == 10.0);
    CHECK(plain.knapsack->value[2] == 6.0);

    const auto bi = parse_str("2 7\n2 5 1\n3 4 9\n", ProblemKind::KNAPSACK);
    REQUIRE(bi.knapsack.has_value());
    REQUIRE(bi.bi_knapsack.has_value());
    CHECK(bi.bi_knapsack->value_a[1] == 4.0);
    CHECK(bi.bi_knapsack->value_b[1] == 9.0);
    CHECK(bi.knapsack->value == bi.bi_knapsack->value_a);

    CHECK_THROWS_AS(parse_str("2 7\n2 5 1\n3 4\n", ProblemKind::KNAPSACK), ParseError);
}

TEST_CASE("tardiness instances parse processing time and due date rows") {
    const auto parsed = parse_str("# jobs\n2\n4 3\n2 6\n", ProblemKind::SMTT);
    REQUIRE(parsed.smtt.has_value());
    CHECK(parsed.smtt->ptime[0] == 4.0);
    CHECK(parsed.smtt->due[1] == 6.0);
    CHECK_THROWS_AS(parse_str("2\n4 3\n", ProblemKind::SMTT), ParseError);
    CHECK_THROWS_AS(parse_str("2\n4 3 9\n2 6\n", ProblemKind::SMTT), ParseError);
}

TEST_CASE("missing instance files are io errors, not parse errors") {
    CHECK_THROWS_AS(parse_instance_file("/nonexistent/nowhere.txt", ProblemKind::TSP),
                    IoError);
}

TEST_CASE("run configs parse sections, case-insensitive keys and comments") {
    const RunConfig cfg = config_str("# experiment\n"
                                     "[problem]\n"
                                     "Problem = tsp\n"
                                     "instance = data/a.tsp\n"
                                     "[evolución]\n"
                                     "P = 80\n"
                                     "p_e = 12\n"
                                     "p_m = 8\n"
                                     "RHO = 0.75\n"
                                     "bias = quadratic\n"
                                     "islands = 2\n"
                                     "migration_interval = 25\n"
                                     "migration_count = 2\n"
                                     "max_generations = 100\n"
                                     "seed = 9\n"
                                     "stall_shake = 10\n"
                                     "shake_intensity = 0.4\n"
                                     "control = abrkga\n"
                                     "threads = 2\n");
    CHECK(cfg.problem == ProblemKind::TSP);
    CHECK(cfg.instance_path == "data/a.tsp");
    CHECK(cfg.brkga.p == 80);
    CHECK(cfg.brkga.p_e == 12);
    CHECK(cfg.brkga.p_m == 8);
    CHECK(cfg.brkga.rho == doctest::Approx(0.75));
    CHECK(cfg.brkga.bias == BiasFunction::QUADRATIC);
    CHECK(cfg.brkga.islands == 2);
    CHECK(cfg.brkga.migration_interval == 25);
    CHECK(cfg.seed == 9);
    CHECK(cfg.max_generations == 100);
    CHECK(cfg.stall_shake == 10);
    CHECK(cfg.shake_intensity == doctest::Approx(0.4));
    CHECK(cfg.control == ControlKind::ABRKGA);
    CHECK(cfg.threads == 2);
}

TEST_CASE("unknown keys and malformed lines are parse errors with lines") {
    try {
        config_str("seed = 1\nnonsense_key = 5\n");
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("test:2") != std::string::npos);
        CHECK(what.find("nonsense_key") != std::string::npos);
    }
    CHECK_THROWS_AS(config_str("just words\n"), ParseError);
    CHECK_THROWS_AS(config_str("seed = notanumber\n"), ParseError);
    CHECK_THROWS_AS(config_str("p = -4\n"), ParseError);
    CHECK_THROWS_AS(config_str("quiet = maybe\n"), ParseError);
    CHECK_THROWS_AS(config_str("bias = cubic\n"), ParseError);
    CHECK_THROWS_AS(config_str("[unterminated\n"), ParseError);
}

TEST_CASE("overrides reuse the config key set") {
    RunConfig cfg;
    apply_config_override(cfg, "p", "50");
    apply_config_override(cfg, "IPR_VARIANT", "permutation");
    apply_config_override(cfg, "second_parent_pool", "entire");
    CHECK(cfg.brkga.p == 50);
    CHECK(cfg.ipr_variant == IprVariant::PERMUTATION);
    CHECK(cfg.brkga.second_parent_pool == ParentPool::ENTIRE);
    CHECK_THROWS_AS(apply_config_override(cfg, "bogus", "1"), ParseError);
    CHECK_THROWS_AS(apply_config_override(cfg, "p", ""), ParseError);
}

TEST_CASE("run config cross-field validation") {
    RunConfig cfg;
    cfg.instance_path = "x";
    cfg.max_generations = 10;
    CHECK_NOTHROW(cfg.validate());

    SUBCASE("a stopping rule is mandatory") {
        cfg.max_generations = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.wall_clock_seconds = 1.5;
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("an instance is mandatory") {
        cfg.instance_path.clear();
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("path relinking needs islands") {
        cfg.ipr_interval = 5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.brkga.islands = 2;
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("abrkga control validates its bounds") {
        cfg.control = ControlKind::ABRKGA;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument); // empty bounds
        cfg.bounds = {100, 40, 5, 15, 20, 4, 0.9, 0.1, 50};
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("the q controller conflicts with self-adaptive genes") {
        cfg.control = ControlKind::QLEARNING;
        cfg.brkga.self_adaptive = true;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.brkga.self_adaptive = false;
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("trigger parameter ranges") {
        cfg.shake_intensity = 1.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.shake_intensity = 0.2;
        cfg.ipr_depth = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("trace rows serialize with nine significant digits") {
    RunTrace trace;
    trace.records.push_back({0, 10.0, 12.3456789123, 0.25, "none"});
    trace.records.push_back({1, 9.5, 11.0, 0.125, "shake"});
    std::ostringstream out;
    write_trace_csv(trace, out);
    CHECK(out.str() == "generation,best,mean,diversity,event\n"
                       "0,10,12.3456789,0.25,none\n"
                       "1,9.5,11,0.125,shake\n");
}

TEST_CASE("sweep grids parse values split on commas or spaces") {
    std::istringstream in("rho = 0.6, 0.7, 0.8\n"
                          "p = 50 100\n");
    const SweepGrid grid = parse_sweep_grid(in, "grid");
    REQUIRE(grid.keys.size() == 2);
    CHECK(grid.keys[0] == "rho");
    CHECK(grid.values[0] == std::vector<std::string>{"0.6", "0.7", "0.8"});
    CHECK(grid.values[1] == std::vector<std::string>{"50", "100"});
}

TEST_CASE("sweep grid rejections") {
    std::istringstream dup("p = 1, 2\np = 3\n");
    CHECK_THROWS_AS(parse_sweep_grid(dup, "grid"), ParseError);
    std::istringstream noeq("p 1 2\n");
    CHECK_THROWS_AS(parse_sweep_grid(noeq, "grid"), ParseError);
    std::istringstream empty_values("p =\n");
    CHECK_THROWS_AS(parse_sweep_grid(empty_values, "grid"), ParseError);
    std::istringstream empty;
    CHECK_THROWS_AS(parse_sweep_grid(empty, "grid"), ParseError);
}
