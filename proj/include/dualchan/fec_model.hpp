#ifndef DUALCHAN_FEC_MODEL_HPP
#define DUALCHAN_FEC_MODEL_HPP

#include <cstdint>
#include <vector>

namespace dualchan::fec {

// Analytical model of the generic FEC layer protecting the main channel.
// The code is characterized only by its rate: a rate R_F code expands a
// K*s-bit generation to K*s/R_F bits, and its correction capability is
// derived from the minimal Hamming distance of that expansion. Bits the
// FEC cannot correct surface as residual bit errors, which in turn erase
// whole symbols; the erased symbols are what the sRLNC redundancy repairs.

struct FecParams {
    double code_rate = 1.0;          // R_F in (0, 1]
    std::size_t generation_size = 1; // K, symbols per generation
    unsigned symbol_bits = 8;        // s

    void validate() const;
    std::uint64_t payload_bits() const {
        return static_cast<std::uint64_t>(generation_size) * symbol_bits;
    }
    // Post-FEC generation size in bits, K*s/R_F rounded up to whole bits.
    std::uint64_t expanded_bits() const;
};

// Minimal Hamming distance of the expanded generation:
// ceil(K*s/R_F - K*s). Throws on code_rate outside (0, 1].
std::uint64_t hamming_distance_min(std::size_t generation_size, unsigned symbol_bits,
                                   double code_rate);

// Correctable erroneous bits for a given minimal distance:
// (d-2)/2 for even d (floored at zero), (d-1)/2 for odd d.
std::uint64_t correctable_bits(std::uint64_t delta_min);

// Residual bit error rate left on the main channel after FEC:
// max(0, (K*s*p_e - R_F*t_k) / (K*s)). Zero means the FEC corrects
// every erroneous bit.
double residual_ber(double expected_ber, const FecParams& params);

// Residual symbol error rate: 1 - (1 - P_b)^s.
double residual_ser(double residual_bit_rate, unsigned symbol_bits);

struct ResidualErrorModel {
    std::uint64_t delta_min = 0;
    std::uint64_t correctable = 0; // t_k
    double bit_error_rate = 0.0;   // P_b
    double symbol_error_rate = 0.0; // P_s
};

ResidualErrorModel residual_error_model(double expected_ber, const FecParams& params);

// Sentinel for fec_filter: treat the FEC as correcting everything.
inline constexpr std::uint64_t kCorrectAll = UINT64_MAX;

// Behavioral stand-in for a real FEC decoder, for bit-level simulation.
// Draws the number of channel bit errors across the expanded generation,
// lets the FEC absorb up to `correctable` of them, and scatters the
// remainder uniformly over the expanded block; a native symbol is erased
// when at least one surviving error lands inside its s-bit slot. Returns
// the per-symbol survival mask. Deterministic per seed.
std::vector<bool> fec_filter(const FecParams& params, double expected_ber,
                             std::uint64_t correctable, std::uint64_t seed);

} // namespace dualchan::fec

#endif
