#ifndef DUALCHAN_PLANNER_HPP
#define DUALCHAN_PLANNER_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dualchan/fec_model.hpp"

namespace dualchan::planner {

inline constexpr double kLightSpeed = 3e8; // m/s

enum class Modulation { Bpsk, Qpsk, Psk8, Psk16 };

unsigned bits_per_symbol(Modulation m);
std::string_view to_string(Modulation m);
std::optional<Modulation> modulation_from_string(std::string_view name);

// Main-channel transmission rate for a modulation level, 2e11 * 2^M bps
// with M bits per symbol. Configs may override with an explicit rate.
double main_rate(Modulation m);

class ProfileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleDistance : public std::runtime_error {
public:
    InfeasibleDistance(const std::string& what, double limit_cm)
        : std::runtime_error(what), limit_cm_(limit_cm) {}
    double limit_cm() const { return limit_cm_; }

private:
    double limit_cm_;
};

struct BerSample {
    double distance_cm = 0.0;
    double ber = 0.0;
};

// Expected BER of a channel as a function of modulation format and
// distance, loaded from a profile file. Lookups interpolate linearly
// between grid distances and refuse to extrapolate.
class ChannelProfile {
public:
    ChannelProfile() = default;
    ChannelProfile(std::string channel_id, std::array<double, 2> band_ghz);

    static ChannelProfile load(const std::string& path);
    static ChannelProfile parse(std::istream& in, const std::string& origin);

    void add_samples(Modulation m, std::vector<BerSample> samples);

    const std::string& channel_id() const { return channel_id_; }
    const std::array<double, 2>& band_ghz() const { return band_ghz_; }
    bool has_modulation(Modulation m) const { return entries_.count(m) != 0; }
    const std::vector<BerSample>& samples(Modulation m) const;

    // Stored value on a grid hit, linear interpolation otherwise.
    // Out-of-range distances raise ProfileError.
    double lookup_ber(Modulation m, double distance_cm) const;

private:
    std::string channel_id_;
    std::array<double, 2> band_ghz_{0.0, 0.0};
    std::map<Modulation, std::vector<BerSample>> entries_;
};

struct AuxChannelSpec {
    std::string channel_id; // "B" or "C" when the auxiliary link is also THz
    Modulation modulation = Modulation::Bpsk;
};

struct LinkConfig {
    std::size_t generation_size = 100; // K
    unsigned symbol_bits = 8;          // s
    double fec_rate = 0.73;            // R_F
    Modulation modulation = Modulation::Psk16;
    double d_main_cm = 0.0;
    double d_aux_cm = 0.0;
    std::optional<double> main_rate_bps; // overrides the modulation mapping
    std::optional<AuxChannelSpec> aux_channel;

    double main_rate_or_default() const {
        return main_rate_bps ? *main_rate_bps : main_rate(modulation);
    }
    fec::FecParams fec_params() const {
        return {fec_rate, generation_size, symbol_bits};
    }
    void validate() const;
};

struct PlanResult {
    double expected_ber = 0.0;        // p_e from the profile
    double residual_bit_rate = 0.0;   // P_b
    double residual_symbol_rate = 0.0; // P_s
    double redundancy_exact = 0.0;    // P_s * K
    long redundancy = 0;              // ceil(P_s * K)
    double code_rate = 1.0;           // R_L = K / (K + R)
    double aux_rate_bps = 0.0;        // delay-matched auxiliary rate
    double aux_distance_limit_cm = 0.0;
    double t_main_s = 0.0;
    double t_aux_s = 0.0;
    bool fractional = false; // redundancy_exact (not the ceiling) fed the rates
    std::optional<double> aux_feasibility_limit_cm; // set when aux_channel given
    bool aux_within_feasibility = true;
};

// Redundant symbols needed to cover the expected erasures: exact value
// P_s*K plus its integer ceiling (whole symbols are what get sent).
std::pair<double, long> required_redundancy(double symbol_error_rate,
                                            std::size_t generation_size);

// sRLNC code rate K / (K + R).
double code_rate(std::size_t generation_size, double redundancy);

// Auxiliary-channel rate that makes the redundancy arrive exactly when
// the natives do: R*s*c_p*C_main / (R_F*C_main*(d_main-d_aux) + c_p*K*s).
// Zero redundancy needs no auxiliary channel and returns 0. Throws
// InfeasibleDistance when d_aux is at or beyond the distance bound.
double aux_rate(double redundancy, unsigned symbol_bits, double fec_rate,
                double main_rate_bps, std::size_t generation_size,
                double d_main_cm, double d_aux_cm);

// Strict upper bound on the auxiliary distance for which a positive
// delay-matched rate exists: K*s*c_p/(R_F*C_main) + d_main.
double max_aux_distance_cm(std::size_t generation_size, unsigned symbol_bits,
                           double fec_rate, double main_rate_bps, double d_main_cm);

struct Delays {
    double t_main_s = 0.0; // K*s/(R_F*C_main) + d_main/c_p
    double t_aux_s = 0.0;  // R*s/(R_F*C_aux) + d_aux/c_p
};

Delays delays(const LinkConfig& config, double redundancy, double aux_rate_bps);

// Longest distance at which a THz auxiliary channel of the given band and
// modulation still runs effectively error-free.
double aux_feasibility_cm(std::string_view channel_id, Modulation m);

// Full sizing chain: profile lookup, residual error model, redundancy,
// code rate, auxiliary rate and delays. With `fractional` set, the exact
// redundancy P_s*K drives the code rate, auxiliary rate and delays
// instead of its ceiling.
PlanResult plan_link(const ChannelProfile& profile, const LinkConfig& config,
                     bool fractional = false);

} // namespace dualchan::planner

#endif
