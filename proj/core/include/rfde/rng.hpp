#pragma once

#include <cmath>
#include <cstdint>

namespace rfde {

// Counter-based random streams keyed by (seed, path, mode, step). Stateless,
// so the draw for a given key is identical no matter which thread asks for it
// or in what order.
namespace rng {

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t path, std::uint64_t mode,
                         std::uint64_t step) {
    std::uint64_t k = mix(seed);
    k = mix(k ^ (path * 0xd1342543de82ef95ull));
    k = mix(k ^ (mode * 0xaf251af3b0f025b5ull));
    k = mix(k ^ (step * 0x9e3779b97f4a7c15ull));
    return k;
}

inline double uniform01(std::uint64_t word) {
    // (0, 1]; never 0 so log() below is safe
    return ((word >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal draw for the given key (Box-Muller).
inline double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t mode,
                     std::uint64_t step) {
    const std::uint64_t k = key(seed, path, mode, step);
    const double u1 = uniform01(k);
    const double u2 = uniform01(mix(k ^ 0x2545f4914f6cdd1dull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

} // namespace rng
} // namespace rfde
