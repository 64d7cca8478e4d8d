#include "brkga/ipr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brkga {

namespace {

// Rewrites [block_begin, block_end) of keys so its own values appear in the
// relative order the guide's keys have there. The value multiset of the
// block is preserved; only positions change.
void reorder_block_to_guide(Chromosome& keys,
                            const Chromosome& guide,
                            std::size_t block_begin,
                            std::size_t block_end) {
    const std::size_t width = block_end - block_begin;
    if (width < 2)
        return;
    std::vector<std::size_t> guide_order =
        ascending_order(std::span<const double>(guide.data() + block_begin, width));
    std::vector<double> own(keys.begin() + block_begin, keys.begin() + block_end);
    std::sort(own.begin(), own.end());
    // guide_order[r] is the in-block position holding the guide's r-th
    // smallest key; give it the base's r-th smallest value.
    for (std::size_t r = 0; r < width; ++r)
        keys[block_begin + guide_order[r]] = own[r];
}

double variant_distance(IprVariant variant, const Chromosome& a, const Chromosome& b) {
    return variant == IprVariant::INDICATOR ? hamming_theta_distance(a, b)
                                            : kendall_tau_distance(a, b);
}

} // namespace

double hamming_theta_distance(const Chromosome& a, const Chromosome& b, double theta) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_theta_distance: chromosome lengths differ");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i] >= theta) != (b[i] >= theta))
            ++mismatches;
    return static_cast<double>(mismatches);
}

double kendall_tau_distance(const Chromosome& a, const Chromosome& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("kendall_tau_distance: chromosome lengths differ");
    const std::size_t len = a.size();
    const std::vector<std::size_t> order_a = ascending_order(a);
    const std::vector<std::size_t> order_b = ascending_order(b);
    std::vector<std::size_t> pos_a(len), pos_b(len);
    for (std::size_t r = 0; r < len; ++r) {
        pos_a[order_a[r]] = r;
        pos_b[order_b[r]] = r;
    }
    std::size_t discordant = 0;
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = i + 1; j < len; ++j) {
            const bool before_a = pos_a[i] < pos_a[j];
            const bool before_b = pos_b[i] < pos_b[j];
            if (before_a != before_b)
                ++discordant;
        }
    return static_cast<double>(discordant);
}

Individual ipr(const Individual& base,
               const Individual& guide,
               IprVariant variant,
               std::size_t block_size,
               double depth,
               const Decoder& decoder,
               std::size_t n,
               const IprObserver& observer) {
    if (!base.decoded() || !guide.decoded())
        throw std::invalid_argument("ipr: base and guide must be decoded");
    if (base.keys.size() != guide.keys.size())
        throw std::invalid_argument("ipr: base and guide lengths differ");
    if (block_size == 0)
        throw std::invalid_argument("ipr: block_size must be positive");
    if (!(depth > 0.0) || depth > 1.0)
        throw std::invalid_argument("ipr: depth must lie in (0, 1]");

    const std::size_t length = base.keys.size();
    const std::size_t width = std::min(block_size, length);
    const std::size_t blocks = (length + width - 1) / width;
    const auto max_adoptions = static_cast<std::size_t>(
        std::ceil(depth * static_cast<double>(blocks)));

    Individual best = base;
    Individual current = base;
    std::vector<std::size_t> remaining(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        remaining[b] = b;

    for (std::size_t adoptions = 0; adoptions < max_adoptions && !remaining.empty();) {
        std::optional<std::size_t> pick_block;
        Individual pick_candidate;
        std::vector<std::size_t> exhausted; // blocks whose move changes nothing

        for (const std::size_t block : remaining) {
            const std::size_t begin = block * width;
            const std::size_t end = std::min(begin + width, length);

            Individual candidate{current.keys, std::nullopt};
            if (variant == IprVariant::INDICATOR)
                std::copy(guide.keys.begin() + static_cast<std::ptrdiff_t>(begin),
                          guide.keys.begin() + static_cast<std::ptrdiff_t>(end),
                          candidate.keys.begin() + static_cast<std::ptrdiff_t>(begin));
            else
                reorder_block_to_guide(candidate.keys, guide.keys, begin, end);

            if (candidate.keys == current.keys) {
                exhausted.push_back(block);
                continue;
            }
            decode_individual(candidate, decoder, n);
            if (better_than(*candidate.fitness, *best.fitness))
                best = candidate;
            // Strict comparison: the lowest block index wins a fitness tie.
            if (!pick_block || better_than(*candidate.fitness, *pick_candidate.fitness)) {
                pick_block = block;
                pick_candidate = std::move(candidate);
            }
        }

        // Drop no-op blocks for good: block moves never touch other blocks,
        // so a no-op now stays a no-op for the rest of the walk.
        for (const std::size_t block : exhausted)
            remaining.erase(std::find(remaining.begin(), remaining.end(), block));
        if (!pick_block)
            break;

        current = std::move(pick_candidate);
        remaining.erase(std::find(remaining.begin(), remaining.end(), *pick_block));
        ++adoptions;
        if (observer)
            observer({*pick_block, variant_distance(variant, current.keys, guide.keys),
                      *current.fitness});
    }
    return best;
}

std::optional<IprPair> pick_ipr_pair(const std::vector<Population>& islands,
                                     double min_dist,
                                     const DistanceFn& metric,
                                     RngStream& rng) {
    if (islands.size() < 2)
        throw std::invalid_argument("pick_ipr_pair: needs at least two islands");
    if (!metric)
        throw std::invalid_argument("pick_ipr_pair: metric is empty");

    std::size_t budget = 0; // total elite count = K * p_e for uniform configs
    for (const Population& island : islands) {
        if (island.elite_size == 0 || island.members.empty())
            throw std::invalid_argument("pick_ipr_pair: island without elite members");
        budget += island.elite_size;
    }

    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
        const std::size_t a = rng.next_index(islands.size());
        std::size_t b = rng.next_index(islands.size() - 1);
        if (b >= a)
            ++b;
        const Individual& base = islands[a].members[rng.next_index(islands[a].elite_size)];
        const Individual& guide = islands[b].members[rng.next_index(islands[b].elite_size)];
        if (metric(base.keys, guide.keys) >= min_dist)
            return IprPair{base, guide, a, b};
    }
    return std::nullopt;
}

} // namespace brkga
