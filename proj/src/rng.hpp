#pragma once

#include <cstdint>

namespace epifit::rng {

// Counter-based randomness: every variate is a pure function of
// (seed, counter), so draws can be partitioned across workers in any
// order and still reproduce the serial sequence bit for bit.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer.
inline std::uint64_t mix_bits(std::uint64_t x) noexcept
{
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// 64 random bits for draw `counter` of stream `seed` (the SplitMix64
// sequence seeded at `seed`, evaluated at position `counter`).
inline std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t counter) noexcept
{
    return mix_bits(seed + kGolden * (counter + 1));
}

// Derives an independent sub-stream seed, e.g. per-trial or per-t0 seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) noexcept
{
    return mix_bits(seed ^ mix_bits(key + kGolden));
}

// Uniform integer in [0, bound) without modulo bias (Lemire multiply-and-
// reject; rejections re-mix in place so the result still depends only on
// (seed, counter)).
inline std::uint64_t bounded_draw(std::uint64_t seed, std::uint64_t counter,
                                  std::uint64_t bound) noexcept
{
    std::uint64_t x = draw_bits(seed, counter);
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const auto wide = static_cast<unsigned __int128>(x) * bound;
        if (static_cast<std::uint64_t>(wide) >= threshold) {
            return static_cast<std::uint64_t>(wide >> 64);
        }
        x = mix_bits(x);
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::uint64_t seed, std::uint64_t counter) noexcept
{
    return static_cast<double>(draw_bits(seed, counter) >> 11) * 0x1.0p-53;
}

} // namespace epifit::rng
