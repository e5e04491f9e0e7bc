#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace lgset {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Folds a seed and a sequence of tags into a stream key. Distinct tag
/// sequences give statistically independent streams.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::span<const std::int64_t> tags) noexcept {
    std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ULL);
    for (std::int64_t t : tags) k = mix64(k ^ (static_cast<std::uint64_t>(t) + 0x9e3779b97f4a7c15ULL + (k << 6)));
    return k;
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::int64_t> tags) noexcept {
    return stream_key(seed, std::span<const std::int64_t>(tags.begin(), tags.size()));
}

/// Counter-based generator: output n is mix64(key + (n+1) * golden).
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions. Two generators with the same key produce the same
/// sequence regardless of which thread runs them.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace lgset
