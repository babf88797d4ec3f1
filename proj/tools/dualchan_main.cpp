// dualchan — planning, sweeping and simulation for dual-channel coded
// transmission: a high-rate main channel carrying native symbols and a
// low-rate error-free auxiliary channel carrying sRLNC redundancy.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualchan/planner.hpp"
#include "dualchan/simulator.hpp"

namespace {

namespace planner = dualchan::planner;
namespace sim = dualchan::sim;

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kProfileError = 2,
    kInfeasibleError = 3,
};

constexpr const char* kProfileDirEnv = "DUALCHAN_PROFILE_DIR";

// Shortest round-trip decimal rendering, independent of the locale.
std::string fmt(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string resolve_profile_path(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) {
        return arg;
    }
    if (const char* dir = std::getenv(kProfileDirEnv)) {
        const fs::path candidate = fs::path(dir) / arg;
        if (fs::exists(candidate)) {
            return candidate.string();
        }
    }
    throw planner::ProfileError("profile: '" + arg + "' not found (also searched $" +
                                std::string(kProfileDirEnv) + ")");
}

planner::Modulation parse_modulation(const std::string& name) {
    const auto m = planner::modulation_from_string(name);
    if (!m) {
        throw std::invalid_argument("unknown modulation '" + name +
                                    "' (expected BPSK, QPSK, 8PSK or 16PSK)");
    }
    return *m;
}

struct FileConfig {
    planner::LinkConfig link;
    std::optional<double> expected_ber;
    std::optional<double> symbol_error_rate;
    std::optional<long> redundancy;
    std::optional<double> aux_rate_bps;
};

FileConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }

    try {
        FileConfig cfg;
        cfg.link.generation_size = doc.value("K", 100);
        cfg.link.symbol_bits = doc.value("s", 8);
        cfg.link.fec_rate = doc.value("rf", 0.73);
        cfg.link.modulation = parse_modulation(doc.at("modulation").get<std::string>());
        cfg.link.d_main_cm = doc.at("d_main_cm").get<double>();
        cfg.link.d_aux_cm = doc.at("d_aux_cm").get<double>();
        if (doc.contains("c_main_bps")) {
            cfg.link.main_rate_bps = doc["c_main_bps"].get<double>();
        }
        if (doc.contains("aux_channel")) {
            planner::AuxChannelSpec aux;
            aux.channel_id = doc["aux_channel"].at("channel").get<std::string>();
            aux.modulation =
                parse_modulation(doc["aux_channel"].at("modulation").get<std::string>());
            cfg.link.aux_channel = aux;
        }
        if (doc.contains("p_e")) {
            cfg.expected_ber = doc["p_e"].get<double>();
        }
        if (doc.contains("symbol_error_rate")) {
            cfg.symbol_error_rate = doc["symbol_error_rate"].get<double>();
        }
        if (doc.contains("redundancy")) {
            cfg.redundancy = doc["redundancy"].get<long>();
        }
        if (doc.contains("c_aux_bps") && doc["c_aux_bps"].is_number()) {
            cfg.aux_rate_bps = doc["c_aux_bps"].get<double>();
        }
        cfg.link.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file '" + out_path + "'");
    }
    out << text;
}

std::string render_plan(const planner::ChannelProfile& profile, const planner::LinkConfig& link,
                        const planner::PlanResult& plan) {
    std::ostringstream out;
    out << "channel:               " << profile.channel_id() << " (" << fmt(profile.band_ghz()[0])
        << "-" << fmt(profile.band_ghz()[1]) << " GHz)\n";
    out << "modulation:            " << planner::to_string(link.modulation) << "\n";
    out << "main rate:             " << fmt(link.main_rate_or_default()) << " bps\n";
    out << "distance main:         " << fmt(link.d_main_cm) << " cm\n";
    out << "distance aux:          " << fmt(link.d_aux_cm) << " cm\n";
    out << "generation size K:     " << link.generation_size << " symbols\n";
    out << "symbol size s:         " << link.symbol_bits << " bits\n";
    out << "fec rate:              " << fmt(link.fec_rate) << "\n";
    out << "redundancy mode:       " << (plan.fractional ? "fractional" : "integer") << "\n";
    out << "expected ber:          " << fmt(plan.expected_ber) << "\n";
    out << "residual ber:          " << fmt(plan.residual_bit_rate) << "\n";
    out << "residual ser:          " << fmt(plan.residual_symbol_rate) << "\n";
    out << "redundancy exact:      " << fmt(plan.redundancy_exact) << " symbols\n";
    out << "redundancy:            " << plan.redundancy << " symbols\n";
    out << "code rate:             " << fmt(plan.code_rate) << "\n";
    out << "aux rate:              " << fmt(plan.aux_rate_bps) << " bps\n";
    out << "aux distance limit:    " << fmt(plan.aux_distance_limit_cm) << " cm\n";
    out << "delay main:            " << fmt(plan.t_main_s) << " s\n";
    out << "delay aux:             " << fmt(plan.t_aux_s) << " s\n";
    if (plan.aux_feasibility_limit_cm) {
        out << "aux error-free limit:  " << fmt(*plan.aux_feasibility_limit_cm) << " cm ("
            << (plan.aux_within_feasibility ? "ok" : "exceeded") << ")\n";
    }
    return out.str();
}

int cmd_plan(const std::string& config_path, const std::string& profile_arg,
             const std::string& r_mode, const std::string& out_path) {
    const FileConfig cfg = load_config(config_path);
    const planner::ChannelProfile profile =
        planner::ChannelProfile::load(resolve_profile_path(profile_arg));
    const planner::PlanResult plan = planner::plan_link(profile, cfg.link, r_mode == "frac");
    write_text(out_path, render_plan(profile, cfg.link, plan));
    return kOk;
}

struct SweepSpec {
    std::string channel;
    std::vector<planner::Modulation> modulations;
    double lo = 0.0, hi = 0.0, step = 0.0;
    std::optional<double> d_aux_cm; // nullopt: track d_main
    bool fractional = false;
    bool strict = false;
};

void parse_range(const std::string& text, SweepSpec& spec) {
    std::istringstream in(text);
    char c1 = 0, c2 = 0;
    if (!(in >> spec.lo >> c1 >> spec.hi >> c2 >> spec.step) || c1 != ':' || c2 != ':' ||
        !in.eof()) {
        throw std::invalid_argument("bad --dmain range '" + text + "', expected lo:hi:step");
    }
    if (spec.step <= 0.0 || spec.hi < spec.lo) {
        throw std::invalid_argument("bad --dmain range: need step > 0 and hi >= lo");
    }
}

int cmd_sweep(const SweepSpec& spec, const planner::ChannelProfile& profile,
              const planner::LinkConfig& base, const std::string& out_path) {
    std::ostringstream csv;
    csv << "modulation,d_main_cm,d_aux_cm,p_e,P_s,R,R_L,C_aux_bps\n";

    for (const planner::Modulation m : spec.modulations) {
        // Index-based stepping; half-step slack keeps hi itself on the grid.
        for (std::size_t i = 0;; ++i) {
            const double d = spec.lo + static_cast<double>(i) * spec.step;
            if (d > spec.hi + spec.step * 0.5) {
                break;
            }
            const double d_main = std::min(d, spec.hi);
            planner::LinkConfig link = base;
            link.modulation = m;
            link.main_rate_bps.reset();
            link.d_main_cm = d_main;
            link.d_aux_cm = spec.d_aux_cm ? *spec.d_aux_cm : d_main;

            csv << planner::to_string(m) << ',' << fmt(d_main) << ',' << fmt(link.d_aux_cm)
                << ',';
            try {
                const planner::PlanResult plan =
                    planner::plan_link(profile, link, spec.fractional);
                const double r_column =
                    spec.fractional ? plan.redundancy_exact
                                    : static_cast<double>(plan.redundancy);
                csv << fmt(plan.expected_ber) << ',' << fmt(plan.residual_symbol_rate) << ','
                    << fmt(r_column) << ',' << fmt(plan.code_rate) << ','
                    << fmt(plan.aux_rate_bps) << '\n';
            } catch (const planner::InfeasibleDistance&) {
                if (spec.strict) {
                    throw;
                }
                // Only the auxiliary rate is undefined; size the code anyway.
                const double p_e = profile.lookup_ber(m, d_main);
                const auto model = dualchan::fec::residual_error_model(p_e, link.fec_params());
                const auto [r_exact, r_whole] = planner::required_redundancy(
                    model.symbol_error_rate, link.generation_size);
                const double r_used = spec.fractional ? r_exact : static_cast<double>(r_whole);
                csv << fmt(p_e) << ',' << fmt(model.symbol_error_rate) << ',' << fmt(r_used)
                    << ',' << fmt(planner::code_rate(link.generation_size, r_used))
                    << ",infeasible\n";
            } catch (const planner::ProfileError&) {
                if (spec.strict) {
                    throw;
                }
                csv << "out_of_range,out_of_range,out_of_range,out_of_range,out_of_range\n";
            }
        }
    }
    write_text(out_path, csv.str());
    return kOk;
}

int cmd_simulate(const std::string& config_path, const std::string& profile_arg,
                 std::size_t generations, std::uint64_t seed, const std::string& mode,
                 const std::string& caux, bool per_generation, const std::string& out_path) {
    const FileConfig cfg = load_config(config_path);

    sim::SimConfig sim_config;
    sim_config.link = cfg.link;
    sim_config.generations = generations;
    sim_config.seed = seed;
    sim_config.mode = mode == "bit" ? sim::ErrorMode::Bit : sim::ErrorMode::Symbol;
    sim_config.expected_ber = cfg.expected_ber;
    sim_config.symbol_error_rate = cfg.symbol_error_rate;
    sim_config.redundancy = cfg.redundancy;
    sim_config.aux_rate_bps = cfg.aux_rate_bps;
    sim_config.per_generation_records = per_generation;
    if (!caux.empty() && caux != "planned") {
        sim_config.aux_rate_bps = std::stod(caux);
    }

    std::optional<planner::ChannelProfile> profile;
    if (!profile_arg.empty()) {
        profile = planner::ChannelProfile::load(resolve_profile_path(profile_arg));
    }

    const sim::SimReport report =
        sim::run_simulation(sim_config, profile ? &*profile : nullptr);

    std::ostringstream out;
    sim::write_report(out, report);
    write_text(out_path, out.str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-channel coded transmission toolkit"};
    app.require_subcommand(1);

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "size redundancy and auxiliary rate for a link");
    std::string plan_config, plan_profile, plan_out;
    std::string plan_r_mode = "int";
    plan_cmd->add_option("--config", plan_config, "link config JSON")->required();
    plan_cmd->add_option("--profile", plan_profile, "channel profile JSON")->required();
    plan_cmd->add_option("--r-mode", plan_r_mode, "redundancy mode: int or frac")
        ->check(CLI::IsMember({"int", "frac"}));
    plan_cmd->add_option("--out", plan_out, "output file (default stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the plan over a distance grid");
    std::string sweep_channel, sweep_profile, sweep_daux = "equal", sweep_out;
    std::string sweep_dmain, sweep_r_mode = "int", sweep_modulations;
    std::size_t sweep_k = 100;
    unsigned sweep_s = 8;
    double sweep_rf = 0.73;
    bool sweep_strict = false;
    sweep_cmd->add_option("--channel", sweep_channel, "channel id (B or C)")->required();
    sweep_cmd->add_option("--modulations", sweep_modulations, "comma-separated modulation list")
        ->required();
    sweep_cmd->add_option("--dmain", sweep_dmain, "main distance grid lo:hi:step in cm")
        ->required();
    sweep_cmd->add_option("--daux", sweep_daux, "aux distance in cm, or 'equal' to track dmain");
    sweep_cmd->add_option("--r-mode", sweep_r_mode, "redundancy mode: int or frac")
        ->check(CLI::IsMember({"int", "frac"}));
    sweep_cmd->add_option("--out", sweep_out, "output CSV (default stdout)");
    sweep_cmd->add_option("--profile", sweep_profile,
                          "channel profile JSON (default channel_<id>.json)");
    sweep_cmd->add_option("--generation-size", sweep_k, "generation size K in symbols");
    sweep_cmd->add_option("--symbol-bits", sweep_s, "symbol size s in bits");
    sweep_cmd->add_option("--fec-rate", sweep_rf, "FEC code rate");
    sweep_cmd->add_flag("--strict", sweep_strict, "abort instead of emitting row markers");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo of the transmission chain");
    std::string sim_config, sim_profile, sim_out, sim_caux;
    std::string sim_mode = "symbol";
    std::size_t sim_generations = 1000;
    std::uint64_t sim_seed = 1;
    bool sim_per_generation = false;
    sim_cmd->add_option("--config", sim_config, "link config JSON")->required();
    sim_cmd->add_option("--generations", sim_generations, "number of generations");
    sim_cmd->add_option("--seed", sim_seed, "PRNG seed, echoed in the report");
    sim_cmd->add_option("--mode", sim_mode, "error mode: symbol or bit")
        ->check(CLI::IsMember({"symbol", "bit"}));
    sim_cmd->add_option("--out", sim_out, "output report JSON (default stdout)");
    sim_cmd->add_option("--profile", sim_profile, "channel profile JSON (optional with overrides)");
    sim_cmd->add_option("--caux", sim_caux, "'planned' or explicit auxiliary rate in bps");
    sim_cmd->add_flag("--per-generation", sim_per_generation, "include per-generation records");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) {
            return cmd_plan(plan_config, plan_profile, plan_r_mode, plan_out);
        }
        if (sweep_cmd->parsed()) {
            SweepSpec spec;
            spec.channel = sweep_channel;
            std::istringstream names(sweep_modulations);
            for (std::string name; std::getline(names, name, ',');) {
                if (!name.empty()) {
                    spec.modulations.push_back(parse_modulation(name));
                }
            }
            parse_range(sweep_dmain, spec);
            if (sweep_daux != "equal") {
                spec.d_aux_cm = std::stod(sweep_daux);
            }
            spec.fractional = sweep_r_mode == "frac";
            spec.strict = sweep_strict;

            std::string profile_arg = sweep_profile;
            if (profile_arg.empty()) {
                std::string id = sweep_channel;
                for (char& c : id) {
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                }
                profile_arg = "channel_" + id + ".json";
            }
            const planner::ChannelProfile profile =
                planner::ChannelProfile::load(resolve_profile_path(profile_arg));
            if (profile.channel_id() != spec.channel) {
                throw std::invalid_argument("profile is for channel '" + profile.channel_id() +
                                            "', sweep requested channel '" + spec.channel + "'");
            }

            planner::LinkConfig base;
            base.generation_size = sweep_k;
            base.symbol_bits = sweep_s;
            base.fec_rate = sweep_rf;
            return cmd_sweep(spec, profile, base, sweep_out);
        }
        if (sim_cmd->parsed()) {
            return cmd_simulate(sim_config, sim_profile, sim_generations, sim_seed, sim_mode,
                                sim_caux, sim_per_generation, sim_out);
        }
    } catch (const planner::InfeasibleDistance& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasibleError;
    } catch (const planner::ProfileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kProfileError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}
