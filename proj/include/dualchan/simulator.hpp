#ifndef DUALCHAN_SIMULATOR_HPP
#define DUALCHAN_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dualchan/fec_model.hpp"
#include "dualchan/planner.hpp"
#include "dualchan/srlnc.hpp"

namespace dualchan::sim {

// Monte Carlo of the transmission chain: segment/encode, natives over the
// main channel (lossy after FEC), redundancy over the auxiliary channel
// (error-free by default), receiver buffering, decode, report.
//
// Event model: the source paces generations by the slower transmitter —
// generation g starts on both channels once g-1 has finished on each.
// Within a generation the two channels run in parallel, so the arrival
// instants are start + t_main + tau_main on the main channel and
// start + t_aux + tau_aux on the auxiliary one. With the delay-matched
// auxiliary rate those coincide and the receiver buffer drains
// immediately; any slower rate leaves natives waiting for redundancy.

enum class ErrorMode { Symbol, Bit };

struct SimConfig {
    planner::LinkConfig link;
    std::size_t generations = 1;
    ErrorMode mode = ErrorMode::Symbol;
    std::uint64_t seed = 0;

    // Resolution order: explicit override, else derived from the profile.
    std::optional<double> expected_ber;      // p_e on the main channel
    std::optional<double> symbol_error_rate; // P_s, symbol mode shortcut
    std::optional<long> redundancy;          // R; default ceil(P_s*K)
    std::optional<double> aux_rate_bps;      // C_aux; default delay-matched

    // Erasures on the auxiliary channel, normally off: the auxiliary link
    // is assumed error-free.
    bool aux_errors = false;
    double aux_symbol_error_rate = 0.0;

    bool per_generation_records = false;
};

enum class GenerationOutcome : std::uint8_t { Success, Insufficient, RankDeficient };

struct GenerationRecord {
    std::uint32_t index = 0;
    std::size_t erased = 0;
    std::size_t received = 0;
    GenerationOutcome outcome = GenerationOutcome::Insufficient;
    double start_s = 0.0;
    double main_arrival_s = 0.0;
    double aux_arrival_s = 0.0;
};

struct SimReport {
    // Resolved parameters, echoed for reproducibility.
    std::uint64_t seed = 0;
    std::size_t generations = 0;
    ErrorMode mode = ErrorMode::Symbol;
    double symbol_error_rate = 0.0;
    double expected_ber = 0.0; // bit mode only; 0 otherwise
    long redundancy = 0;
    double aux_rate_bps = 0.0;

    // Per-generation latencies, constant across generations.
    double t_main_s = 0.0;
    double t_aux_s = 0.0;
    double skew_s = 0.0; // t_aux_s - t_main_s when redundancy flows

    // Outcomes.
    std::size_t decoded = 0;
    std::size_t insufficient = 0;
    std::size_t rank_deficient = 0;
    double generation_loss_rate = 0.0;
    double symbol_erasure_rate = 0.0; // empirical, natives only
    std::size_t payload_mismatches = 0; // decoded generations not matching the source

    // Receiver buffer, in symbols. Max is the instantaneous peak
    // including a just-arrived batch; mean is time-weighted.
    std::size_t buffer_max_symbols = 0;
    double buffer_mean_symbols = 0.0;

    double elapsed_s = 0.0; // last arrival instant
    double goodput_bps = 0.0; // decoded native bits per simulated second

    std::vector<GenerationRecord> records; // filled when requested
};

struct ArrivalTimes {
    double start_s = 0.0;
    double main_s = 0.0;
    double aux_s = 0.0;
};

// Absolute per-generation transmission start and arrival instants under
// back-to-back pacing. For a single generation the arrival instants equal
// the planner delays.
std::vector<ArrivalTimes> compute_arrival_times(const planner::LinkConfig& config,
                                                double redundancy, double aux_rate_bps,
                                                std::size_t generations);

struct MainChannelModel {
    ErrorMode mode = ErrorMode::Symbol;
    double symbol_error_rate = 0.0; // symbol mode: i.i.d. native erasure probability
    fec::FecParams fec;             // bit mode: FEC shape for the filter stub
    double expected_ber = 0.0;      // bit mode: channel BER before FEC
    std::uint64_t correctable = 0;  // bit mode: t_k
};

struct MainChannelResult {
    std::vector<srlnc::CodedSymbol> received; // surviving natives
    std::size_t erased = 0;
};

// Applies post-FEC erasures to the native symbols of one coded
// generation. Redundant symbols travel on the auxiliary channel and are
// not touched here. Deterministic per (seed, generation index).
MainChannelResult apply_main_channel_errors(const srlnc::CodedGeneration& coded,
                                            const MainChannelModel& model,
                                            std::uint64_t seed);

// Runs the full chain. The profile supplies p_e unless the config carries
// an explicit override; it may be null when overrides make it unnecessary.
// Deterministic for a fixed config and seed.
SimReport run_simulation(const SimConfig& config,
                         const planner::ChannelProfile* profile = nullptr);

// JSON rendering of a report: summary block plus optional per-generation
// records. Stable field order, locale-independent numbers.
void write_report(std::ostream& out, const SimReport& report);

} // namespace dualchan::sim

#endif
