#ifndef DUALCHAN_GF256_HPP
#define DUALCHAN_GF256_HPP

#include <array>
#include <cstdint>
#include <stdexcept>

namespace dualchan::gf {

// Arithmetic over GF(2^8) with reduction polynomial
// x^8 + x^4 + x^3 + x^2 + 1 (0x11d) and generator 0x02, the
// conventional choice in erasure-coding practice.
inline constexpr unsigned kReductionPoly = 0x11d;

using Element = std::uint8_t;

namespace detail {

struct Tables {
    std::array<Element, 512> exp{};
    std::array<Element, 256> log{};
};

constexpr Tables build_tables() {
    Tables t{};
    unsigned x = 1;
    for (unsigned i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<Element>(x);
        t.log[x] = static_cast<Element>(i);
        x <<= 1;
        if (x & 0x100) {
            x ^= kReductionPoly;
        }
    }
    // Duplicate the cycle so mul can index log[a] + log[b] without a modulo.
    for (unsigned i = 255; i < 512; ++i) {
        t.exp[i] = t.exp[i - 255];
    }
    return t;
}

inline constexpr Tables tables = build_tables();

} // namespace detail

constexpr Element add(Element a, Element b) {
    return a ^ b;
}

constexpr Element mul(Element a, Element b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    return detail::tables.exp[detail::tables.log[a] + detail::tables.log[b]];
}

// Multiplicative inverse; zero has none.
inline Element inv(Element a) {
    if (a == 0) {
        throw std::domain_error("gf256: zero has no multiplicative inverse");
    }
    return detail::tables.exp[255 - detail::tables.log[a]];
}

} // namespace dualchan::gf

#endif
