#ifndef BRKGA_RNG_HPP_
#define BRKGA_RNG_HPP_

#include <cstdint>
#include <random>

namespace brkga {

/**
 * Deterministic random number stream.
 *
 * A stream is identified by a (seed, stream_id) pair. The underlying engine
 * is std::mt19937_64, whose output sequence is fixed by the C++ standard,
 * seeded with a splitmix64 mix of the pair. All variates are derived from
 * raw engine words by explicit arithmetic (never through std::*_distribution,
 * whose algorithms are implementation-defined), so any two builds on any
 * platform produce bit-identical sequences for the same (seed, stream_id).
 *
 * Independent substreams for islands, generation phases, or per-offspring
 * gene draws are obtained with fork() or by constructing streams with
 * distinct stream ids from the same master seed.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    /// Next raw 64-bit engine word.
    std::uint64_t next_u64();

    /// Uniform double in [0.0, 1.0) with 53-bit resolution.
    double next_unit();

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t next_below(std::uint64_t bound);

    /// Uniform index into a container of the given size. size must be positive.
    std::size_t next_index(std::size_t size);

    /// Bernoulli draw: true with the given probability.
    bool next_bool(double probability);

    /**
     * Derives an independent child stream. The child is seeded from the next
     * engine word of this stream, so consecutive forks yield distinct
     * children while remaining fully reproducible.
     */
    RngStream fork();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer: the documented 64-bit mixing function used to
/// derive engine seeds from (seed, stream_id) pairs.
std::uint64_t mix64(std::uint64_t x);

} // namespace brkga

#endif // BRKGA_RNG_HPP_
