#pragma once

// Portable random streams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Standard distributions are implementation-defined, so every
// variate is derived from raw 64-bit draws with the conversions below.
//
// Stream splitting: each field group of a generated object draws from its own
// engine seeded with derive_seed(seed, tag), where tag is a small constant
// naming the group (see StreamTag). Adding a field group never perturbs the
// values of an existing one.

#include <cmath>
#include <cstdint>
#include <random>

namespace rfcs {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return splitmix64(seed ^ splitmix64(tag));
}

enum class StreamTag : std::uint64_t {
    coords = 1,
    demands = 2,
    backhauls = 3,
    time_windows = 4,
    limit = 5,
    instance_index = 6,
    search_order = 7,
    initial_tour = 8,
    train_batch = 9,
    train_rollout = 10,
    heldout = 11,
};

/// Seed of the index-th member of a family of objects drawn from one stream.
constexpr std::uint64_t indexed_seed(std::uint64_t seed, StreamTag tag,
                                     std::uint64_t index) noexcept {
    return splitmix64(derive_seed(seed, static_cast<std::uint64_t>(tag)) + index);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, StreamTag tag)
        : engine_(derive_seed(seed, static_cast<std::uint64_t>(tag))) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [lo, hi] (inclusive).
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        const int k = static_cast<int>(std::floor(uniform() * span));
        return lo + (k > hi - lo ? hi - lo : k);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace rfcs
