#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace risia {

// splitmix64 finalizer; used to derive well-separated seeds from user seeds
// and stream tags.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (0x9E3779B97F4A7C15ULL + b));
}

template <typename... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, Rest... rest) {
    return mix_seed(mix_seed(a, b), static_cast<std::uint64_t>(rest)...);
}

// Deterministic random engine. Distribution helpers are hand-rolled on top
// of the (standardized) mt19937_64 output so draws are identical across
// standard-library implementations, unlike std::uniform_real_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double canonical() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double canonical_pos() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

    // Uniform index in [0, n). Multiply-shift; bias is < 2^-64 per draw.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>((static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

    // One standard normal draw via Box-Muller. No spare caching: every call
    // consumes exactly two uniforms, keeping draw positions predictable.
    double normal() {
        double r = std::sqrt(-2.0 * std::log(canonical_pos()));
        return r * std::cos(2.0 * std::numbers::pi * canonical());
    }

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(first[i - 1], first[index(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// Independent substream for (seed, tags...); used so that samples drawn in
// parallel are seed-stable regardless of thread scheduling.
template <typename... Tags>
Rng substream(std::uint64_t seed, Tags... tags) {
    return Rng(mix_seed(seed, static_cast<std::uint64_t>(tags)...));
}

} // namespace risia
