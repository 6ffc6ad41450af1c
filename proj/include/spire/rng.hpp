#pragma once

#include <cstdint>
#include <random>

namespace spire {

// Seed scrambler (the standard splitmix64 finalizer). Used to derive
// independent engine seeds from one user seed; keeps nearby seeds from
// producing correlated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// mt19937_64 output is bit-exact across platforms, but the standard
// *distributions* are not, so every draw below maps raw engine output
// ourselves. Fixtures stay reproducible on any toolchain.
inline std::uint64_t draw_u64(std::mt19937_64& rng) {
    return rng();
}

// Uniform integer in [0, bound). Modulo bias at 64 bits is far below any
// tolerance used here and keeps the draw a single engine call.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

inline int draw_int(std::mt19937_64& rng, int lo, int hi_inclusive) {
    return lo + static_cast<int>(draw_below(
                    rng, static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool draw_chance(std::mt19937_64& rng, double probability) {
    return draw_unit(rng) < probability;
}

}  // namespace spire
