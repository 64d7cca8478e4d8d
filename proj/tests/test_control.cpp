#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "brkga/control.hpp"

using namespace brkga;

namespace {

Fitness single(double v) { return {{v}, {Sense::MINIMIZE}}; }

struct SumDecoder : Decoder {
    Fitness decode(std::span<const double> keys) const override {
        double sum = 0.0;
        for (double k : keys)
            sum += k;
        return single(sum);
    }
    std::vector<std::size_t> solution(std::span<const double> keys) const override {
        return ascending_order(keys);
    }
};

ScheduleBounds sane_bounds() {
    ScheduleBounds bounds;
    bounds.p_max = 100;
    bounds.p_min = 40;
    bounds.pe_min = 5;
    bounds.pe_max = 15;
    bounds.pm_max = 20;
    bounds.pm_min = 4;
    bounds.alpha_max = 0.9;
    bounds.alpha_min = 0.1;
    bounds.g_max = 50;
    return bounds;
}

} // namespace

TEST_CASE("schedule bounds validation") {
    CHECK_NOTHROW(sane_bounds().validate());

    ScheduleBounds bounds = sane_bounds();
    SUBCASE("ordered pairs") {
        bounds.p_min = 200;
        CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);
    }
    SUBCASE("elite endpoint must respect the smallest population") {
        bounds.pe_max = 20; // 2 * 20 is not < 40
        CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);
    }
    SUBCASE("elites plus mutants must fit the smallest population") {
        bounds.pe_max = 19;
        bounds.pm_max = 21;
        CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);
    }
    SUBCASE("alpha range") {
        bounds.alpha_min = 1.2;
        CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);
        bounds.alpha_min = 0.5;
        bounds.alpha_max = 0.4;
        CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);
    }
    SUBCASE("horizon") {
        bounds.g_max = 0;
        CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);
    }
}

TEST_CASE("schedule endpoints and saturation") {
    const ScheduleBounds bounds = sane_bounds();
    const ControlSnapshot at0 = abrkga_tick(0, bounds);
    CHECK(at0.p == bounds.p_max);
    CHECK(at0.p_e == bounds.pe_min);
    CHECK(at0.p_m == bounds.pm_max);
    CHECK(at0.alpha == doctest::Approx(bounds.alpha_max));

    const ControlSnapshot at_end = abrkga_tick(bounds.g_max, bounds);
    CHECK(at_end.p == bounds.p_min);
    CHECK(at_end.p_e == bounds.pe_max);
    CHECK(at_end.p_m == bounds.pm_min);
    CHECK(at_end.alpha == doctest::Approx(bounds.alpha_min));

    const ControlSnapshot beyond = abrkga_tick(bounds.g_max * 10, bounds);
    CHECK(beyond.p == at_end.p);
    CHECK(beyond.p_e == at_end.p_e);
    CHECK(beyond.p_m == at_end.p_m);
    CHECK(beyond.alpha == doctest::Approx(at_end.alpha));
}

TEST_CASE("schedule is monotone and always valid along the horizon") {
    const ScheduleBounds bounds = sane_bounds();
    ControlSnapshot prev = abrkga_tick(0, bounds);
    for (std::uint64_t g = 1; g <= bounds.g_max + 5; ++g) {
        const ControlSnapshot snap = abrkga_tick(g, bounds);
        CHECK(snap.p <= prev.p);
        CHECK(snap.p_m <= prev.p_m);
        CHECK(snap.p_e >= prev.p_e);
        CHECK(snap.alpha <= prev.alpha + 1e-12);
        CHECK(2 * snap.p_e < snap.p);
        CHECK(snap.p_e + snap.p_m < snap.p);
        CHECK(snap.p_e >= 1);
        CHECK(snap.p_m >= 1);
        prev = snap;
    }
}

TEST_CASE("population resizing truncates or pads with decoded mutants") {
    SumDecoder decoder;
    BrkgaConfig config;
    config.n = 4;
    config.p = 10;
    config.p_e = 3;
    config.p_m = 2;
    RngStream rng(91, 0);
    Population pop = init_population(config, decoder, {}, rng);
    const Chromosome best = pop.best().keys;
    const double worst_before = pop.members.back().fitness->values[0];

    apply_population_resize(pop, 7, config, decoder, rng);
    CHECK(pop.size() == 7);
    CHECK(pop.best().keys == best); // shrinking removes only the worst
    for (const Individual& m : pop.members)
        CHECK(m.fitness->values[0] <= worst_before);

    apply_population_resize(pop, 12, config, decoder, rng);
    CHECK(pop.size() == 12);
    CHECK(pop.best().keys == best);
    for (const Individual& m : pop.members) {
        REQUIRE(m.decoded());
        CHECK(m.keys.size() == config.n);
    }
    for (std::size_t i = 1; i < pop.size(); ++i)
        CHECK_FALSE(better_than(*pop.members[i].fitness, *pop.members[i - 1].fitness));

    CHECK_THROWS_AS(apply_population_resize(pop, 5, config, decoder, rng),
                    std::invalid_argument); // 3 + 2 + 1 > 5
}

TEST_CASE("control genes decode to the documented parameter bands") {
    Chromosome keys{0.1, 0.2, 0.3, /* rho gene */ 0.0, /* shake gene */ 0.25};
    CHECK(self_adaptive_rho(keys, 3) == doctest::Approx(0.65));
    keys[3] = 1.0 - 1e-12;
    CHECK(self_adaptive_rho(keys, 3) == doctest::Approx(0.8));
    CHECK(self_adaptive_shake_intensity(keys, 3) == doctest::Approx(0.25));

    const Chromosome bare{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(self_adaptive_rho(bare, 3), std::invalid_argument);
    CHECK_THROWS_AS(self_adaptive_shake_intensity(bare, 3), std::invalid_argument);
}

TEST_CASE("q-table update follows the one-step rule") {
    QParams params;
    params.learning_rate = 0.5;
    params.discount = 0.9;
    QTable q(2, 2, params);
    CHECK(q.value(0, 0) == 0.0);

    // Q(0,0) += 0.5 * (1 + 0.9 * max(Q(1,.)) - 0) = 0.5
    q.update(0, 0, 1.0, 1);
    CHECK(q.value(0, 0) == doctest::Approx(0.5));

    // Q(1,1) += 0.5 * (2 + 0.9 * max(0.5, 0) - 0) = 0.5 * 2.45 = 1.225
    q.update(1, 1, 2.0, 0);
    CHECK(q.value(1, 1) == doctest::Approx(1.225));

    // Second visit to (0,0): Q += 0.5 * (0 + 0.9 * 1.225 - 0.5)
    q.update(0, 0, 0.0, 1);
    CHECK(q.value(0, 0) == doctest::Approx(0.5 + 0.5 * (0.9 * 1.225 - 0.5)));

    CHECK_THROWS_AS(q.update(2, 0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(q.update(0, 2, 0.0, 0), std::invalid_argument);
}

TEST_CASE("exploration decays exponentially and greedy picks the lowest tie") {
    QParams params;
    params.eta0 = 1.0;
    params.lambda = 0.1;
    QTable q(1, 3, params);
    CHECK(q.exploration_rate(0) == doctest::Approx(1.0));
    CHECK(q.exploration_rate(10) == doctest::Approx(std::exp(-1.0)));

    // All values equal: greedy resolves to action 0. At a huge t the
    // exploration probability is ~0, so the pick is deterministic.
    RngStream rng(3, 3);
    for (int rep = 0; rep < 20; ++rep)
        CHECK(q.select_action(0, 1000000, rng) == 0);

    q.update(0, 2, 100.0, 0); // make action 2 clearly best
    for (int rep = 0; rep < 20; ++rep)
        CHECK(q.select_action(0, 1000000, rng) == 2);

    // At t = 0 with eta0 = 1 every pick explores: all actions appear.
    std::vector<int> seen(3, 0);
    for (int rep = 0; rep < 300; ++rep)
        ++seen[q.select_action(0, 0, rng)];
    for (int count : seen)
        CHECK(count > 0);
}

TEST_CASE("q-table construction validates its grid and parameters") {
    CHECK_THROWS_AS(QTable(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(QTable(3, 0), std::invalid_argument);
    QParams bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(QTable(2, 2, bad), std::invalid_argument);
    bad = {};
    bad.discount = 1.5;
    CHECK_THROWS_AS(QTable(2, 2, bad), std::invalid_argument);
    bad = {};
    bad.lambda = -0.1;
    CHECK_THROWS_AS(QTable(2, 2, bad), std::invalid_argument);
}
