#include "dualchan/fec_model.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "dualchan/rng.hpp"

namespace dualchan::fec {

namespace {

// ceil with a guard for values that are meant to be integral but land a
// few ulps off after division (e.g. 80/0.8).
std::uint64_t ceil_counted(double value) {
    if (value <= 0.0) {
        return 0;
    }
    const double nearest = std::round(value);
    if (std::abs(value - nearest) < 1e-9 * std::max(1.0, std::abs(value))) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(value));
}

void check_rate(double code_rate) {
    if (!(code_rate > 0.0) || code_rate > 1.0) {
        throw std::invalid_argument("fec: code rate must lie in (0, 1]");
    }
}

} // namespace

void FecParams::validate() const {
    check_rate(code_rate);
    if (generation_size == 0) {
        throw std::invalid_argument("fec: generation size must be at least 1");
    }
    if (symbol_bits == 0 || symbol_bits % 8 != 0) {
        throw std::invalid_argument("fec: symbol size must be a positive multiple of 8 bits");
    }
}

std::uint64_t FecParams::expanded_bits() const {
    return payload_bits() + hamming_distance_min(generation_size, symbol_bits, code_rate);
}

std::uint64_t hamming_distance_min(std::size_t generation_size, unsigned symbol_bits,
                                   double code_rate) {
    check_rate(code_rate);
    const double payload = static_cast<double>(generation_size) * symbol_bits;
    return ceil_counted(payload / code_rate - payload);
}

std::uint64_t correctable_bits(std::uint64_t delta_min) {
    if (delta_min % 2 == 0) {
        return delta_min < 2 ? 0 : (delta_min - 2) / 2;
    }
    return (delta_min - 1) / 2;
}

double residual_ber(double expected_ber, const FecParams& params) {
    params.validate();
    if (expected_ber < 0.0 || expected_ber > 1.0) {
        throw std::domain_error("fec: expected BER must lie in [0, 1]");
    }
    const std::uint64_t delta =
        hamming_distance_min(params.generation_size, params.symbol_bits, params.code_rate);
    const std::uint64_t t_k = correctable_bits(delta);
    // (K*s*p_e - R_F*t_k)/(K*s) written as p_e minus the correction
    // threshold, so inputs at the threshold clamp to exactly zero.
    const double threshold =
        params.code_rate * static_cast<double>(t_k) / static_cast<double>(params.payload_bits());
    return expected_ber <= threshold ? 0.0 : expected_ber - threshold;
}

double residual_ser(double residual_bit_rate, unsigned symbol_bits) {
    if (residual_bit_rate < 0.0 || residual_bit_rate > 1.0) {
        throw std::domain_error("fec: residual BER must lie in [0, 1]");
    }
    return 1.0 - std::pow(1.0 - residual_bit_rate, static_cast<double>(symbol_bits));
}

ResidualErrorModel residual_error_model(double expected_ber, const FecParams& params) {
    params.validate();
    ResidualErrorModel model;
    model.delta_min =
        hamming_distance_min(params.generation_size, params.symbol_bits, params.code_rate);
    model.correctable = correctable_bits(model.delta_min);
    model.bit_error_rate = residual_ber(expected_ber, params);
    model.symbol_error_rate = residual_ser(model.bit_error_rate, params.symbol_bits);
    return model;
}

std::vector<bool> fec_filter(const FecParams& params, double expected_ber,
                             std::uint64_t correctable, std::uint64_t seed) {
    params.validate();
    if (expected_ber < 0.0 || expected_ber > 1.0) {
        throw std::domain_error("fec: expected BER must lie in [0, 1]");
    }

    std::vector<bool> survives(params.generation_size, true);
    rng::Engine eng(rng::derive(seed, 0xfec0));

    const std::uint64_t expanded = params.expanded_bits();
    std::uint64_t errors = 0;
    for (std::uint64_t i = 0; i < expanded; ++i) {
        if (rng::bernoulli(eng, expected_ber)) {
            ++errors;
        }
    }
    if (correctable == kCorrectAll || errors <= correctable) {
        return survives;
    }

    // Surviving error bits sit anywhere in the expanded block; only the
    // ones inside the K*s native region destroy a symbol, the rest fall
    // into FEC overhead.
    std::uint64_t residual = errors - correctable;
    if (residual > expanded) {
        residual = expanded;
    }
    std::unordered_set<std::uint64_t> positions;
    positions.reserve(static_cast<std::size_t>(residual));
    while (positions.size() < residual) {
        positions.insert(eng() % expanded);
    }

    const std::uint64_t native_bits = params.payload_bits();
    for (std::uint64_t pos : positions) {
        if (pos < native_bits) {
            survives[static_cast<std::size_t>(pos / params.symbol_bits)] = false;
        }
    }
    return survives;
}

} // namespace dualchan::fec
