#include "dualchan/simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include "dualchan/rng.hpp"

namespace dualchan::sim {

namespace {

constexpr std::uint64_t kStreamPayload = 0x70617961; // source data bytes
constexpr std::uint64_t kStreamCoding = 0x636f6465;  // encoder coefficient seeds
constexpr std::uint64_t kStreamMain = 0x6d61696e;    // main-channel erasures
constexpr std::uint64_t kStreamAux = 0x617578;       // auxiliary-channel erasures

struct ResolvedParams {
    double symbol_error_rate = 0.0;
    double expected_ber = 0.0;
    bool has_expected_ber = false;
    long redundancy = 0;
    double aux_rate_bps = 0.0;
    std::uint64_t correctable = 0;
};

ResolvedParams resolve(const SimConfig& config, const planner::ChannelProfile* profile) {
    config.link.validate();
    if (config.generations == 0) {
        throw std::invalid_argument("sim: need at least one generation");
    }
    if (config.aux_errors &&
        (config.aux_symbol_error_rate < 0.0 || config.aux_symbol_error_rate > 1.0)) {
        throw std::domain_error("sim: auxiliary symbol error rate must lie in [0, 1]");
    }

    ResolvedParams p;
    const fec::FecParams fec_params = config.link.fec_params();
    p.correctable = fec::correctable_bits(fec::hamming_distance_min(
        fec_params.generation_size, fec_params.symbol_bits, fec_params.code_rate));

    if (config.expected_ber) {
        if (*config.expected_ber < 0.0 || *config.expected_ber > 1.0) {
            throw std::domain_error("sim: expected BER must lie in [0, 1]");
        }
        p.expected_ber = *config.expected_ber;
        p.has_expected_ber = true;
    } else if (profile != nullptr) {
        p.expected_ber = profile->lookup_ber(config.link.modulation, config.link.d_main_cm);
        p.has_expected_ber = true;
    }
    if (config.mode == ErrorMode::Bit && !p.has_expected_ber) {
        throw std::invalid_argument("sim: bit mode needs an expected BER or a channel profile");
    }

    if (config.symbol_error_rate) {
        if (*config.symbol_error_rate < 0.0 || *config.symbol_error_rate > 1.0) {
            throw std::domain_error("sim: symbol error rate must lie in [0, 1]");
        }
        p.symbol_error_rate = *config.symbol_error_rate;
    } else if (p.has_expected_ber) {
        p.symbol_error_rate =
            fec::residual_error_model(p.expected_ber, fec_params).symbol_error_rate;
    } else {
        throw std::invalid_argument(
            "sim: no channel profile and no expected-BER or symbol-error-rate override");
    }

    if (config.redundancy) {
        if (*config.redundancy < 0) {
            throw std::invalid_argument("sim: redundancy cannot be negative");
        }
        p.redundancy = *config.redundancy;
    } else {
        p.redundancy =
            planner::required_redundancy(p.symbol_error_rate, config.link.generation_size).second;
    }

    if (config.aux_rate_bps) {
        if (*config.aux_rate_bps < 0.0) {
            throw std::invalid_argument("sim: auxiliary rate cannot be negative");
        }
        p.aux_rate_bps = *config.aux_rate_bps;
    } else {
        p.aux_rate_bps = planner::aux_rate(
            static_cast<double>(p.redundancy), config.link.symbol_bits, config.link.fec_rate,
            config.link.main_rate_or_default(), config.link.generation_size,
            config.link.d_main_cm, config.link.d_aux_cm);
    }
    if (p.redundancy > 0 && p.aux_rate_bps <= 0.0) {
        throw std::invalid_argument("sim: positive redundancy needs a positive auxiliary rate");
    }
    return p;
}

struct ChannelTimes {
    double t_main = 0.0; // transmission time per generation, main
    double t_aux = 0.0;  // transmission time per generation, aux
    double tau_main = 0.0;
    double tau_aux = 0.0;
    double spacing = 0.0; // source pacing interval
};

ChannelTimes channel_times(const planner::LinkConfig& config, double redundancy,
                           double aux_rate_bps) {
    ChannelTimes t;
    const double payload_bits = static_cast<double>(config.generation_size) * config.symbol_bits;
    t.t_main = payload_bits / (config.fec_rate * config.main_rate_or_default());
    t.tau_main = config.d_main_cm / 100.0 / planner::kLightSpeed;
    t.tau_aux = config.d_aux_cm / 100.0 / planner::kLightSpeed;
    if (redundancy > 0.0 && aux_rate_bps > 0.0) {
        t.t_aux = redundancy * config.symbol_bits / (config.fec_rate * aux_rate_bps);
    }
    t.spacing = std::max(t.t_main, t.t_aux);
    return t;
}

// Everything the event loop needs to know about one generation; the coded
// symbols themselves are dropped once the decode outcome is settled.
struct GenerationSummary {
    std::size_t erased = 0;
    std::size_t natives_delivered = 0;
    std::size_t redundant_delivered = 0;
    bool decodable_first_batch = false; // resolves already at the earlier batch
    GenerationOutcome outcome = GenerationOutcome::Insufficient;
    bool mismatch = false;
};

} // namespace

std::vector<ArrivalTimes> compute_arrival_times(const planner::LinkConfig& config,
                                                double redundancy, double aux_rate_bps,
                                                std::size_t generations) {
    const ChannelTimes t = channel_times(config, redundancy, aux_rate_bps);
    std::vector<ArrivalTimes> out(generations);
    for (std::size_t g = 0; g < generations; ++g) {
        out[g].start_s = static_cast<double>(g) * t.spacing;
        out[g].main_s = out[g].start_s + t.t_main + t.tau_main;
        out[g].aux_s = out[g].start_s + t.t_aux + t.tau_aux;
    }
    return out;
}

MainChannelResult apply_main_channel_errors(const srlnc::CodedGeneration& coded,
                                            const MainChannelModel& model,
                                            std::uint64_t seed) {
    MainChannelResult result;
    const std::size_t k = coded.generation_size();

    std::vector<bool> survives;
    if (model.mode == ErrorMode::Symbol) {
        survives.assign(k, true);
        rng::Engine eng(rng::derive(seed, kStreamMain, coded.index));
        for (std::size_t i = 0; i < k; ++i) {
            survives[i] = !rng::bernoulli(eng, model.symbol_error_rate);
        }
    } else {
        survives = fec::fec_filter(model.fec, model.expected_ber, model.correctable,
                                   rng::derive(seed, kStreamMain, coded.index));
    }

    for (std::size_t i = 0; i < k; ++i) {
        if (survives[i]) {
            result.received.push_back(coded.native[i]);
        } else {
            ++result.erased;
        }
    }
    return result;
}

SimReport run_simulation(const SimConfig& config, const planner::ChannelProfile* profile) {
    const ResolvedParams params = resolve(config, profile);
    const std::size_t k = config.link.generation_size;
    const std::size_t symbol_bytes = config.link.symbol_bits / 8;

    SimReport report;
    report.seed = config.seed;
    report.generations = config.generations;
    report.mode = config.mode;
    report.symbol_error_rate = params.symbol_error_rate;
    report.expected_ber = config.mode == ErrorMode::Bit ? params.expected_ber : 0.0;
    report.redundancy = params.redundancy;
    report.aux_rate_bps = params.aux_rate_bps;

    const ChannelTimes times =
        channel_times(config.link, static_cast<double>(params.redundancy), params.aux_rate_bps);
    report.t_main_s = times.t_main + times.tau_main;
    report.t_aux_s = times.t_aux + times.tau_aux;
    const bool has_aux = params.redundancy > 0;
    report.skew_s = has_aux ? report.t_aux_s - report.t_main_s : 0.0;

    MainChannelModel channel_model;
    channel_model.mode = config.mode;
    channel_model.symbol_error_rate = params.symbol_error_rate;
    channel_model.fec = config.link.fec_params();
    channel_model.expected_ber = params.expected_ber;
    channel_model.correctable = params.correctable;

    const bool main_first = !has_aux || report.t_main_s <= report.t_aux_s;

    // Transmit + decode every generation up front; outcomes do not depend
    // on absolute timing, only on which symbols got through. The timeline
    // pass below replays arrivals for the buffering statistics.
    std::vector<GenerationSummary> summaries(config.generations);
    std::size_t total_erased = 0;
    for (std::uint32_t g = 0; g < config.generations; ++g) {
        srlnc::Generation source;
        source.index = g;
        source.symbol_bytes = symbol_bytes;
        source.data.resize(k * symbol_bytes);
        rng::Engine data_rng(rng::derive(config.seed, kStreamPayload, g));
        for (auto& byte : source.data) {
            byte = rng::uniform_byte(data_rng);
        }

        const srlnc::CodedGeneration coded = srlnc::encode_generation(
            source, static_cast<std::size_t>(params.redundancy),
            rng::derive(config.seed, kStreamCoding, g));

        MainChannelResult main_result = apply_main_channel_errors(coded, channel_model, config.seed);

        std::vector<srlnc::CodedSymbol> arrived = std::move(main_result.received);
        const std::size_t natives_delivered = arrived.size();
        if (has_aux) {
            rng::Engine aux_rng(rng::derive(config.seed, kStreamAux, g));
            for (const srlnc::CodedSymbol& sym : coded.redundant) {
                if (config.aux_errors && rng::bernoulli(aux_rng, config.aux_symbol_error_rate)) {
                    continue;
                }
                arrived.push_back(sym);
            }
        }

        GenerationSummary& summary = summaries[g];
        summary.erased = main_result.erased;
        summary.natives_delivered = natives_delivered;
        summary.redundant_delivered = arrived.size() - natives_delivered;
        total_erased += summary.erased;

        // Earlier batch alone: all natives decode by themselves; a pure
        // redundancy batch can only suffice when R >= K.
        if (main_first) {
            summary.decodable_first_batch = summary.erased == 0;
        } else if (summary.redundant_delivered >= k) {
            const std::span<const srlnc::CodedSymbol> redundant_only{
                arrived.data() + natives_delivered, summary.redundant_delivered};
            summary.decodable_first_batch =
                srlnc::decode_generation(redundant_only, k, symbol_bytes).status ==
                srlnc::DecodeStatus::Ok;
        }

        const srlnc::DecodeResult decoded = srlnc::decode_generation(arrived, k, symbol_bytes);
        switch (decoded.status) {
        case srlnc::DecodeStatus::Ok:
            summary.outcome = GenerationOutcome::Success;
            summary.mismatch = decoded.data != source.data;
            break;
        case srlnc::DecodeStatus::InsufficientSymbols:
            summary.outcome = GenerationOutcome::Insufficient;
            break;
        case srlnc::DecodeStatus::RankDeficient:
            summary.outcome = GenerationOutcome::RankDeficient;
            break;
        }
    }

    // Timeline replay for receiver buffering. Symbols of a generation are
    // held until it decodes or until both batches are in and it cannot.
    struct Event {
        double time;
        std::uint32_t generation;
        bool aux;
    };
    std::vector<Event> events;
    events.reserve(config.generations * (has_aux ? 2 : 1));
    const auto arrivals = compute_arrival_times(config.link, static_cast<double>(params.redundancy),
                                                params.aux_rate_bps, config.generations);
    for (std::uint32_t g = 0; g < config.generations; ++g) {
        events.push_back({arrivals[g].main_s, g, false});
        if (has_aux) {
            events.push_back({arrivals[g].aux_s, g, true});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.generation != b.generation) return a.generation < b.generation;
        return a.aux < b.aux;
    });

    std::vector<std::uint8_t> batches_seen(config.generations, 0);
    std::vector<std::size_t> held(config.generations, 0);
    std::vector<std::uint8_t> resolved(config.generations, 0);
    std::size_t buffer = 0;
    std::size_t buffer_peak = 0;
    double buffer_integral = 0.0;
    double last_time = 0.0;

    for (const Event& ev : events) {
        buffer_integral += static_cast<double>(buffer) * (ev.time - last_time);
        last_time = ev.time;

        const std::uint32_t g = ev.generation;
        const GenerationSummary& summary = summaries[g];
        ++batches_seen[g];
        const bool first = batches_seen[g] == 1;
        const bool last = batches_seen[g] == (has_aux ? 2 : 1);

        if (!resolved[g]) {
            const std::size_t batch_size =
                ev.aux ? summary.redundant_delivered : summary.natives_delivered;
            buffer += batch_size;
            held[g] += batch_size;
            buffer_peak = std::max(buffer_peak, buffer);

            const bool done = (first && summary.decodable_first_batch) || last;
            if (done) {
                resolved[g] = 1;
                buffer -= held[g];
                held[g] = 0;
            }
        }
    }

    report.elapsed_s = events.empty() ? 0.0 : events.back().time;
    report.buffer_max_symbols = buffer_peak;
    report.buffer_mean_symbols = report.elapsed_s > 0.0 ? buffer_integral / report.elapsed_s : 0.0;

    for (std::uint32_t g = 0; g < config.generations; ++g) {
        const GenerationSummary& summary = summaries[g];
        switch (summary.outcome) {
        case GenerationOutcome::Success: ++report.decoded; break;
        case GenerationOutcome::Insufficient: ++report.insufficient; break;
        case GenerationOutcome::RankDeficient: ++report.rank_deficient; break;
        }
        if (summary.mismatch) {
            ++report.payload_mismatches;
        }
        if (config.per_generation_records) {
            GenerationRecord rec;
            rec.index = g;
            rec.erased = summary.erased;
            rec.received = summary.natives_delivered + summary.redundant_delivered;
            rec.outcome = summary.outcome;
            rec.start_s = arrivals[g].start_s;
            rec.main_arrival_s = arrivals[g].main_s;
            rec.aux_arrival_s = has_aux ? arrivals[g].aux_s : 0.0;
            report.records.push_back(rec);
        }
    }

    const double n = static_cast<double>(config.generations);
    report.generation_loss_rate =
        static_cast<double>(report.insufficient + report.rank_deficient) / n;
    report.symbol_erasure_rate =
        static_cast<double>(total_erased) / (n * static_cast<double>(k));
    if (report.elapsed_s > 0.0) {
        report.goodput_bps = static_cast<double>(report.decoded) * static_cast<double>(k) *
                             config.link.symbol_bits / report.elapsed_s;
    }
    return report;
}

} // namespace dualchan::sim
