#ifndef DUALCHAN_RNG_HPP
#define DUALCHAN_RNG_HPP

#include <cstdint>
#include <random>

namespace dualchan::rng {

// splitmix64 finalizer, used to derive independent substream seeds from a
// master seed without correlated low bits.
constexpr std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t index = 0) {
    return splitmix(splitmix(seed ^ splitmix(stream)) + index);
}

// All randomness is drawn through these helpers rather than <random>
// distributions, whose output is implementation-defined. mt19937_64 plus
// bit masking keeps streams reproducible across standard libraries.
using Engine = std::mt19937_64;

inline std::uint8_t uniform_byte(Engine& eng) {
    return static_cast<std::uint8_t>(eng() & 0xff);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& eng, double p) {
    return uniform01(eng) < p;
}

} // namespace dualchan::rng

#endif
