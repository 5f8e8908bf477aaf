#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace abcde {

/// All randomness flows through explicitly passed streams; nothing global.
using RandomStream = std::mt19937_64;

namespace detail {
inline constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ULL;
}

/// SplitMix64 finalizer (Stafford mix13 constants).
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Per-task seed: a pure function of (master seed, task id), so streams are
/// identical regardless of scheduling. Task id 0 is the background graph,
/// positive ids are communities, negative ids are reserved control streams.
inline std::uint64_t derive_task_seed(std::uint64_t master_seed, std::int64_t task_id) {
    return mix64(master_seed ^ (static_cast<std::uint64_t>(task_id + 1) * detail::kSeedStride));
}

// Reserved control-stream ids (see engine).
inline constexpr std::int64_t kMergeTaskId = -1;
inline constexpr std::int64_t kSetupTaskId = -2;
inline constexpr std::int64_t kQueueShuffleTaskId = -3;

inline RandomStream make_stream(std::uint64_t master_seed, std::int64_t task_id) {
    return RandomStream(derive_task_seed(master_seed, task_id));
}

/// Uniform integer in [0, n), n > 0. Rejection sampling keeps it exact and
/// independent of library distribution internals.
inline std::uint64_t bounded(RandomStream& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(RandomStream& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(RandomStream& rng, double p) {
    return uniform01(rng) < p;
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void fisher_yates(std::span<T> values, RandomStream& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

template <typename T>
void fisher_yates(std::vector<T>& values, RandomStream& rng) {
    fisher_yates(std::span<T>(values), rng);
}

} // namespace abcde
