#include "brkga/rng.hpp"

#include <stdexcept>

namespace brkga {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer (Steele, Lea & Flood / Vigna).
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(mix64(mix64(seed) ^ mix64(stream_id) ^ stream_id)) {}

std::uint64_t RngStream::next_u64() {
    return engine_();
}

double RngStream::next_unit() {
    // Top 53 bits scaled by 2^-53: uniform on [0, 1), never 1.0.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("RngStream::next_below: bound must be positive");
    // Rejection sampling over the low excess range keeps the draw unbiased.
    const std::uint64_t excess = (0 - bound) % bound; // 2^64 mod bound
    for (;;) {
        const std::uint64_t word = engine_();
        if (word >= excess)
            return word % bound;
    }
}

std::size_t RngStream::next_index(std::size_t size) {
    return static_cast<std::size_t>(next_below(static_cast<std::uint64_t>(size)));
}

bool RngStream::next_bool(double probability) {
    return next_unit() < probability;
}

RngStream RngStream::fork() {
    return RngStream(engine_(), 0x5eedf0cdULL);
}

} // namespace brkga
