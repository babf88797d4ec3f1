#include <ostream>

#include <json.hpp>

#include "dualchan/simulator.hpp"

namespace dualchan::sim {

namespace {

const char* outcome_name(GenerationOutcome o) {
    switch (o) {
    case GenerationOutcome::Success: return "success";
    case GenerationOutcome::Insufficient: return "insufficient";
    case GenerationOutcome::RankDeficient: return "rank_deficient";
    }
    return "unknown";
}

} // namespace

void write_report(std::ostream& out, const SimReport& report) {
    nlohmann::ordered_json summary;
    summary["seed"] = report.seed;
    summary["generations"] = report.generations;
    summary["mode"] = report.mode == ErrorMode::Symbol ? "symbol" : "bit";
    summary["symbol_error_rate"] = report.symbol_error_rate;
    if (report.mode == ErrorMode::Bit) {
        summary["expected_ber"] = report.expected_ber;
    }
    summary["redundancy"] = report.redundancy;
    summary["aux_rate_bps"] = report.aux_rate_bps;
    summary["t_main_s"] = report.t_main_s;
    summary["t_aux_s"] = report.t_aux_s;
    summary["skew_s"] = report.skew_s;
    summary["decoded"] = report.decoded;
    summary["insufficient"] = report.insufficient;
    summary["rank_deficient"] = report.rank_deficient;
    summary["generation_loss_rate"] = report.generation_loss_rate;
    summary["symbol_erasure_rate"] = report.symbol_erasure_rate;
    summary["payload_mismatches"] = report.payload_mismatches;
    summary["buffer_max_symbols"] = report.buffer_max_symbols;
    summary["buffer_mean_symbols"] = report.buffer_mean_symbols;
    summary["elapsed_s"] = report.elapsed_s;
    summary["goodput_bps"] = report.goodput_bps;

    nlohmann::ordered_json doc;
    doc["summary"] = std::move(summary);
    if (!report.records.empty()) {
        nlohmann::ordered_json records = nlohmann::ordered_json::array();
        for (const GenerationRecord& rec : report.records) {
            nlohmann::ordered_json row;
            row["index"] = rec.index;
            row["erased"] = rec.erased;
            row["received"] = rec.received;
            row["outcome"] = outcome_name(rec.outcome);
            row["start_s"] = rec.start_s;
            row["main_arrival_s"] = rec.main_arrival_s;
            row["aux_arrival_s"] = rec.aux_arrival_s;
            records.push_back(std::move(row));
        }
        doc["records"] = std::move(records);
    }
    out << doc.dump(2) << '\n';
}

} // namespace dualchan::sim
