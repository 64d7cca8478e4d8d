#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "brkga/decoders.hpp"
#include "brkga/ipr.hpp"

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

Individual make_decoded(Chromosome keys, const Decoder& decoder) {
    Individual member;
    member.keys = std::move(keys);
    decode_individual(member, decoder, member.keys.size());
    return member;
}

} // namespace

TEST_CASE("indicator distance counts threshold disagreements") {
    CHECK(hamming_theta_distance({0.2, 0.8, 0.5}, {0.2, 0.8, 0.5}) == 0.0);
    CHECK(hamming_theta_distance({0.1, 0.9}, {0.9, 0.1}) == 2.0);
    // 0.5 is on the selected side of the default threshold.
    CHECK(hamming_theta_distance({0.5}, {0.49}) == 1.0);
    CHECK(hamming_theta_distance({0.3}, {0.7}, 0.8) == 0.0);
    CHECK_THROWS_AS(hamming_theta_distance({0.1}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("kendall distance counts discordant pairs of the encoded orders") {
    CHECK(kendall_tau_distance({0.1, 0.2, 0.3}, {0.15, 0.25, 0.35}) == 0.0);
    // Opposite orders: all 3 pairs discordant.
    CHECK(kendall_tau_distance({0.1, 0.2, 0.3}, {0.3, 0.2, 0.1}) == 3.0);
    // One adjacent transposition: exactly one discordant pair.
    CHECK(kendall_tau_distance({0.1, 0.2, 0.3}, {0.2, 0.1, 0.3}) == 1.0);
}

TEST_CASE("relinking a chromosome to itself is a fixed point") {
    SumDecoder decoder;
    const Individual base = make_decoded({0.4, 0.1, 0.7, 0.3}, decoder);
    const Individual out = ipr(base, base, IprVariant::INDICATOR, 2, 1.0, decoder, 4);
    CHECK(out.keys == base.keys);
}

TEST_CASE("a full-depth single-block indicator walk reaches the guide") {
    SumDecoder decoder;
    const Individual base = make_decoded({0.9, 0.8, 0.7, 0.6}, decoder);
    const Individual guide = make_decoded({0.1, 0.2, 0.3, 0.4}, decoder);
    // One block spanning everything: the only candidate is the guide itself,
    // and it is better, so the walk adopts it.
    const Individual out = ipr(base, guide, IprVariant::INDICATOR, 4, 1.0, decoder, 4);
    CHECK(out.keys == guide.keys);
}

TEST_CASE("the walk result is never worse than the base") {
    SumDecoder decoder;
    RngStream rng(77, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const Individual base = make_decoded(new_random_chromosome(6, rng), decoder);
        const Individual guide = make_decoded(new_random_chromosome(6, rng), decoder);
        for (const IprVariant variant : {IprVariant::INDICATOR, IprVariant::PERMUTATION}) {
            const Individual out = ipr(base, guide, variant, 2, 1.0, decoder, 6);
            CHECK_FALSE(better_than(*base.fitness, *out.fitness));
        }
    }
}

TEST_CASE("observer sees non-increasing distance to the guide") {
    SumDecoder decoder;
    RngStream rng(78, 0);
    for (const IprVariant variant : {IprVariant::INDICATOR, IprVariant::PERMUTATION}) {
        const Individual base = make_decoded(new_random_chromosome(8, rng), decoder);
        const Individual guide = make_decoded(new_random_chromosome(8, rng), decoder);
        const double start = variant == IprVariant::INDICATOR
                                 ? hamming_theta_distance(base.keys, guide.keys)
                                 : kendall_tau_distance(base.keys, guide.keys);
        double prev = start;
        std::size_t steps = 0;
        ipr(base, guide, variant, 2, 1.0, decoder, 8,
            [&](const IprStep& step) {
                CHECK(step.distance_to_guide <= prev);
                prev = step.distance_to_guide;
                ++steps;
            });
        CHECK(steps <= 4); // ceil(1.0 * 4 blocks)
    }
}

TEST_CASE("permutation moves reorder the base's own keys") {
    SumDecoder decoder;
    const Individual base = make_decoded({0.8, 0.1, 0.6, 0.3}, decoder);
    const Individual guide = make_decoded({0.05, 0.9, 0.2, 0.7}, decoder);
    const Individual out = ipr(base, guide, IprVariant::PERMUTATION, 4, 1.0, decoder, 4);
    // Whatever happened, the multiset of keys is preserved under this variant.
    Chromosome a = base.keys, b = out.keys;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    // And a sum decoder cannot distinguish permutations, so the walk stops
    // immediately: fitness equals the base's.
    CHECK(out.fitness->values[0] == doctest::Approx(base.fitness->values[0]));
}

TEST_CASE("blocks whose move is a no-op are dropped without hurting progress") {
    SumDecoder decoder;
    // First block (2 keys) already matches the guide; second differs.
    const Individual base = make_decoded({0.1, 0.2, 0.9, 0.9}, decoder);
    const Individual guide = make_decoded({0.1, 0.2, 0.3, 0.3}, decoder);
    std::size_t adoptions = 0;
    const Individual out = ipr(base, guide, IprVariant::INDICATOR, 2, 1.0, decoder, 4,
                               [&](const IprStep& step) {
                                   CHECK(step.adopted_block == 1);
                                   ++adoptions;
                               });
    CHECK(adoptions == 1);
    CHECK(out.keys == guide.keys);
}

TEST_CASE("depth truncates the number of adoptions") {
    SumDecoder decoder;
    const Individual base = make_decoded({0.9, 0.9, 0.9, 0.9, 0.9, 0.9}, decoder);
    const Individual guide = make_decoded({0.1, 0.1, 0.1, 0.1, 0.1, 0.1}, decoder);
    std::size_t adoptions = 0;
    // 3 blocks of width 2, depth 0.5 -> ceil(1.5) = 2 adoptions at most.
    ipr(base, guide, IprVariant::INDICATOR, 2, 0.5, decoder, 6,
        [&](const IprStep&) { ++adoptions; });
    CHECK(adoptions == 2);
}

TEST_CASE("walk argument validation") {
    SumDecoder decoder;
    const Individual base = make_decoded({0.1, 0.2}, decoder);
    const Individual guide = make_decoded({0.3, 0.4}, decoder);
    CHECK_THROWS_AS(ipr(base, guide, IprVariant::INDICATOR, 0, 1.0, decoder, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(ipr(base, guide, IprVariant::INDICATOR, 1, 0.0, decoder, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(ipr(base, guide, IprVariant::INDICATOR, 1, 1.5, decoder, 2),
                    std::invalid_argument);
    const Individual longer = make_decoded({0.1, 0.2, 0.3}, decoder);
    CHECK_THROWS_AS(ipr(base, longer, IprVariant::INDICATOR, 1, 1.0, decoder, 2),
                    std::invalid_argument);
}

TEST_CASE("pair picking respects the distance threshold and island split") {
    SumDecoder decoder;
    BrkgaConfig config;
    config.n = 6;
    config.p = 8;
    config.p_e = 2;
    config.p_m = 2;

    std::vector<Population> islands;
    for (std::uint64_t i = 0; i < 3; ++i) {
        RngStream rng(200 + i, 0);
        islands.push_back(init_population(config, decoder, {}, rng));
    }
    RngStream picker(5, 9);

    SUBCASE("picked endpoints are elites of two distinct islands") {
        for (int rep = 0; rep < 50; ++rep) {
            const auto pair = pick_ipr_pair(islands, 0.0, mean_abs_distance, picker);
            REQUIRE(pair.has_value());
            CHECK(pair->base_island != pair->guide_island);
            auto is_elite_of = [&](const Individual& member, std::size_t island) {
                const Population& pop = islands[island];
                return std::any_of(pop.members.begin(),
                                   pop.members.begin() +
                                       static_cast<std::ptrdiff_t>(pop.elite_size),
                                   [&](const Individual& m) { return m.keys == member.keys; });
            };
            CHECK(is_elite_of(pair->base, pair->base_island));
            CHECK(is_elite_of(pair->guide, pair->guide_island));
        }
    }
    SUBCASE("an unreachable threshold yields nothing") {
        const auto pair = pick_ipr_pair(islands, 100.0, mean_abs_distance, picker);
        CHECK_FALSE(pair.has_value());
    }
    SUBCASE("one island cannot be relinked") {
        std::vector<Population> one(islands.begin(), islands.begin() + 1);
        CHECK_THROWS_AS(pick_ipr_pair(one, 0.0, mean_abs_distance, picker),
                        std::invalid_argument);
    }
}
