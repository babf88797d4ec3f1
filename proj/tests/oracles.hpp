// Test-only reference implementations, kept independent of the library
// paths they check.
#ifndef DUALCHAN_TESTS_ORACLES_HPP
#define DUALCHAN_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracles {

// Field multiplication from the definition: carry-less product reduced by
// x^8+x^4+x^3+x^2+1.
inline std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    unsigned acc = 0;
    for (unsigned bit = 0; bit < 8; ++bit) {
        if (b & (1u << bit)) {
            acc ^= static_cast<unsigned>(a) << bit;
        }
    }
    for (int deg = 14; deg >= 8; --deg) {
        if (acc & (1u << deg)) {
            acc ^= 0x11du << (deg - 8);
        }
    }
    return static_cast<std::uint8_t>(acc);
}

// Inverse by exhaustive search over the 255 candidates.
inline std::uint8_t gf_inv(std::uint8_t a) {
    for (unsigned b = 1; b < 256; ++b) {
        if (gf_mul(a, static_cast<std::uint8_t>(b)) == 1) {
            return static_cast<std::uint8_t>(b);
        }
    }
    throw std::domain_error("no inverse");
}

// Rank of a matrix over GF(2^8) by plain forward elimination on the
// reference field ops.
inline std::size_t gf_matrix_rank(std::vector<std::vector<std::uint8_t>> rows,
                                  std::size_t width) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
        std::size_t pivot = SIZE_MAX;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (rows[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot == SIZE_MAX) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        const std::uint8_t scale = gf_inv(rows[rank][col]);
        for (auto& v : rows[rank]) {
            v = gf_mul(v, scale);
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) {
                continue;
            }
            const std::uint8_t f = rows[r][col];
            for (std::size_t c = 0; c < width; ++c) {
                rows[r][c] = static_cast<std::uint8_t>(rows[r][c] ^ gf_mul(f, rows[rank][c]));
            }
        }
        ++rank;
    }
    return rank;
}

// Upper tail P(Binomial(n, p) > threshold), summed in log space.
inline double binomial_tail(unsigned n, double p, unsigned threshold) {
    if (p <= 0.0) {
        return 0.0;
    }
    if (p >= 1.0) {
        return threshold < n ? 1.0 : 0.0;
    }
    double sum = 0.0;
    for (unsigned i = threshold + 1; i <= n; ++i) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                                std::lgamma(n - i + 1.0) + i * std::log(p) +
                                (n - i) * std::log1p(-p);
        sum += std::exp(log_term);
    }
    return sum;
}

// P(a random k x k matrix over GF(q) is singular):
// 1 - prod_{i=1..k} (1 - q^-i). The product form is validated against
// exhaustive enumeration over small fields in the test suites.
inline double singular_probability(unsigned k, double q) {
    double nonsingular = 1.0;
    for (unsigned i = 1; i <= k; ++i) {
        nonsingular *= 1.0 - std::pow(q, -static_cast<double>(i));
    }
    return 1.0 - nonsingular;
}

} // namespace oracles

#endif
