#include "dualchan/planner.hpp"

#include <algorithm>
#include <cmath>

namespace dualchan::planner {

unsigned bits_per_symbol(Modulation m) {
    switch (m) {
    case Modulation::Bpsk: return 1;
    case Modulation::Qpsk: return 2;
    case Modulation::Psk8: return 3;
    case Modulation::Psk16: return 4;
    }
    throw std::invalid_argument("planner: unknown modulation");
}

std::string_view to_string(Modulation m) {
    switch (m) {
    case Modulation::Bpsk: return "BPSK";
    case Modulation::Qpsk: return "QPSK";
    case Modulation::Psk8: return "8PSK";
    case Modulation::Psk16: return "16PSK";
    }
    throw std::invalid_argument("planner: unknown modulation");
}

std::optional<Modulation> modulation_from_string(std::string_view name) {
    if (name == "BPSK") return Modulation::Bpsk;
    if (name == "QPSK") return Modulation::Qpsk;
    if (name == "8PSK") return Modulation::Psk8;
    if (name == "16PSK") return Modulation::Psk16;
    return std::nullopt;
}

double main_rate(Modulation m) {
    return 2e11 * static_cast<double>(1u << bits_per_symbol(m));
}

ChannelProfile::ChannelProfile(std::string channel_id, std::array<double, 2> band_ghz)
    : channel_id_(std::move(channel_id)), band_ghz_(band_ghz) {}

void ChannelProfile::add_samples(Modulation m, std::vector<BerSample> samples) {
    if (samples.empty()) {
        throw ProfileError("profile: empty sample list for " + std::string(to_string(m)));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].ber < 0.0 || samples[i].ber > 1.0) {
            throw ProfileError("profile: BER outside [0, 1]");
        }
        if (i > 0 && samples[i].distance_cm <= samples[i - 1].distance_cm) {
            throw ProfileError("profile: distances must be strictly increasing");
        }
    }
    entries_[m] = std::move(samples);
}

const std::vector<BerSample>& ChannelProfile::samples(Modulation m) const {
    auto it = entries_.find(m);
    if (it == entries_.end()) {
        throw ProfileError("profile: no samples for modulation " + std::string(to_string(m)));
    }
    return it->second;
}

double ChannelProfile::lookup_ber(Modulation m, double distance_cm) const {
    const std::vector<BerSample>& grid = samples(m);
    if (distance_cm < grid.front().distance_cm || distance_cm > grid.back().distance_cm) {
        throw ProfileError("profile: distance " + std::to_string(distance_cm) +
                           " cm outside the covered range [" +
                           std::to_string(grid.front().distance_cm) + ", " +
                           std::to_string(grid.back().distance_cm) + "] for " +
                           std::string(to_string(m)));
    }
    auto upper = std::lower_bound(grid.begin(), grid.end(), distance_cm,
                                  [](const BerSample& s, double d) { return s.distance_cm < d; });
    if (upper->distance_cm == distance_cm) {
        return upper->ber;
    }
    auto lower = std::prev(upper);
    const double span = upper->distance_cm - lower->distance_cm;
    const double t = (distance_cm - lower->distance_cm) / span;
    return lower->ber + t * (upper->ber - lower->ber);
}

void LinkConfig::validate() const {
    fec_params().validate();
    if (d_main_cm <= 0.0 || d_aux_cm <= 0.0) {
        throw std::invalid_argument("planner: distances must be positive");
    }
    if (main_rate_or_default() <= 0.0) {
        throw std::invalid_argument("planner: main-channel rate must be positive");
    }
}

std::pair<double, long> required_redundancy(double symbol_error_rate,
                                            std::size_t generation_size) {
    if (symbol_error_rate < 0.0 || symbol_error_rate > 1.0) {
        throw std::domain_error("planner: symbol error rate must lie in [0, 1]");
    }
    const double exact = symbol_error_rate * static_cast<double>(generation_size);
    const double nearest = std::round(exact);
    long whole;
    if (std::abs(exact - nearest) < 1e-9 * std::max(1.0, exact)) {
        whole = static_cast<long>(nearest);
    } else {
        whole = static_cast<long>(std::ceil(exact));
    }
    return {exact, whole};
}

double code_rate(std::size_t generation_size, double redundancy) {
    if (generation_size == 0) {
        throw std::invalid_argument("planner: generation size must be at least 1");
    }
    if (redundancy < 0.0) {
        throw std::invalid_argument("planner: redundancy cannot be negative");
    }
    const double k = static_cast<double>(generation_size);
    return k / (k + redundancy);
}

namespace {

// Additive distance margin K*s*c_p/(R_F*C_main), in meters. The
// feasibility check and the rate denominator are both written against the
// cm-space limit below so they cannot disagree at the boundary.
double aux_margin_m(std::size_t generation_size, unsigned symbol_bits, double fec_rate,
                    double main_rate_bps) {
    return static_cast<double>(generation_size) * symbol_bits * kLightSpeed /
           (fec_rate * main_rate_bps);
}

} // namespace

double aux_rate(double redundancy, unsigned symbol_bits, double fec_rate,
                double main_rate_bps, std::size_t generation_size,
                double d_main_cm, double d_aux_cm) {
    if (redundancy < 0.0) {
        throw std::invalid_argument("planner: redundancy cannot be negative");
    }
    if (redundancy == 0.0) {
        return 0.0; // no redundancy, no auxiliary channel
    }
    const double limit_cm = max_aux_distance_cm(generation_size, symbol_bits, fec_rate,
                                                main_rate_bps, d_main_cm);
    if (d_aux_cm >= limit_cm) {
        throw InfeasibleDistance(
            "planner: auxiliary distance " + std::to_string(d_aux_cm) +
                " cm is at or beyond the delay-matching limit " + std::to_string(limit_cm) +
                " cm; no positive auxiliary rate can deliver the redundancy in time",
            limit_cm);
    }
    const double gap_m = (limit_cm - d_aux_cm) / 100.0;
    return redundancy * symbol_bits * kLightSpeed / (fec_rate * gap_m);
}

double max_aux_distance_cm(std::size_t generation_size, unsigned symbol_bits,
                           double fec_rate, double main_rate_bps, double d_main_cm) {
    return d_main_cm +
           aux_margin_m(generation_size, symbol_bits, fec_rate, main_rate_bps) * 100.0;
}

Delays delays(const LinkConfig& config, double redundancy, double aux_rate_bps) {
    Delays d;
    const double payload_bits =
        static_cast<double>(config.generation_size) * config.symbol_bits;
    d.t_main_s = payload_bits / (config.fec_rate * config.main_rate_or_default()) +
                 config.d_main_cm / 100.0 / kLightSpeed;
    d.t_aux_s = config.d_aux_cm / 100.0 / kLightSpeed;
    if (redundancy > 0.0 && aux_rate_bps > 0.0) {
        d.t_aux_s += redundancy * config.symbol_bits / (config.fec_rate * aux_rate_bps);
    }
    return d;
}

double aux_feasibility_cm(std::string_view channel_id, Modulation m) {
    // Longest error-free distances per band and modulation.
    if (channel_id == "B") {
        switch (m) {
        case Modulation::Psk16: return 100.0;
        case Modulation::Psk8: return 200.0;
        case Modulation::Qpsk: return 400.0;
        case Modulation::Bpsk: return 600.0;
        }
    }
    if (channel_id == "C") {
        switch (m) {
        case Modulation::Psk16: return 50.0;
        case Modulation::Psk8: return 150.0;
        case Modulation::Qpsk: return 300.0;
        case Modulation::Bpsk: return 450.0;
        }
    }
    throw std::invalid_argument("planner: no feasibility data for channel '" +
                                std::string(channel_id) + "'");
}

PlanResult plan_link(const ChannelProfile& profile, const LinkConfig& config,
                     bool fractional) {
    config.validate();

    PlanResult plan;
    plan.fractional = fractional;
    plan.expected_ber = profile.lookup_ber(config.modulation, config.d_main_cm);

    const fec::ResidualErrorModel model =
        fec::residual_error_model(plan.expected_ber, config.fec_params());
    plan.residual_bit_rate = model.bit_error_rate;
    plan.residual_symbol_rate = model.symbol_error_rate;

    std::tie(plan.redundancy_exact, plan.redundancy) =
        required_redundancy(plan.residual_symbol_rate, config.generation_size);

    const double effective_r =
        fractional ? plan.redundancy_exact : static_cast<double>(plan.redundancy);
    const double c_main = config.main_rate_or_default();

    plan.code_rate = code_rate(config.generation_size, effective_r);
    plan.aux_rate_bps = aux_rate(effective_r, config.symbol_bits, config.fec_rate, c_main,
                                 config.generation_size, config.d_main_cm, config.d_aux_cm);
    plan.aux_distance_limit_cm = max_aux_distance_cm(
        config.generation_size, config.symbol_bits, config.fec_rate, c_main, config.d_main_cm);

    const Delays d = delays(config, effective_r, plan.aux_rate_bps);
    plan.t_main_s = d.t_main_s;
    plan.t_aux_s = d.t_aux_s;

    if (config.aux_channel) {
        plan.aux_feasibility_limit_cm =
            aux_feasibility_cm(config.aux_channel->channel_id, config.aux_channel->modulation);
        plan.aux_within_feasibility = config.d_aux_cm <= *plan.aux_feasibility_limit_cm;
    }
    return plan;
}

} // namespace dualchan::planner
