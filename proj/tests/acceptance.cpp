// Acceptance suite: runs every release criterion and prints one line per
// check. Exit code 0 only when all of them hold.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dualchan/fec_model.hpp"
#include "dualchan/gf256.hpp"
#include "dualchan/planner.hpp"
#include "dualchan/simulator.hpp"
#include "dualchan/srlnc.hpp"
#include "oracles.hpp"

using namespace dualchan;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool ok, const std::string& detail = "") {
    std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, label,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) {
        ++failures;
    }
}

std::string fmt_two(double a, double b) {
    std::ostringstream ss;
    ss << a << " vs " << b;
    return ss.str();
}

// --- criterion 1: FEC model anchors -------------------------------------

void criterion_fec_anchors() {
    const bool ok = fec::hamming_distance_min(100, 8, 0.73) == 296 &&
                    fec::correctable_bits(296) == 147;
    report(1, "minimal distance 296 and correctable budget 147", ok);
}

// --- criterion 2: code-rate anchors --------------------------------------

void criterion_code_rates() {
    const std::pair<long, double> anchors[] = {
        {41, 0.71}, {10, 0.91}, {50, 0.67}, {88, 0.53}, {25, 0.80}, {0, 1.00},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [r, expected] : anchors) {
        const double got = planner::code_rate(100, static_cast<double>(r));
        if (std::abs(got - expected) > 0.005) {
            ok = false;
            detail = "R=" + std::to_string(r) + ": " + fmt_two(got, expected);
        }
    }
    report(2, "published code-rate levels within 0.005", ok, detail);
}

// --- criterion 3: auxiliary-rate anchors ----------------------------------

void criterion_aux_rates() {
    struct Anchor {
        double redundancy, c_main, d_main, d_aux, expected;
    };
    const Anchor anchors[] = {
        {50, 3.2e12, 1150, 500, 2.453e10},
        {10, 3.2e12, 500, 500, 3.111e11},
        {50, 3.2e12, 1500, 1500, 1.577e12},
        {88, 1.6e12, 2000, 2000, 1.400e12},
    };
    bool ok = true;
    std::string detail;
    for (const Anchor& a : anchors) {
        const double got =
            planner::aux_rate(a.redundancy, 8, 0.73, a.c_main, 100, a.d_main, a.d_aux);
        if (std::abs(got - a.expected) > 0.03 * a.expected) {
            ok = false;
            detail = fmt_two(got, a.expected);
        }
    }
    report(3, "published auxiliary-rate peaks within 3%", ok, detail);
}

// --- criterion 4: delay equality ------------------------------------------

void criterion_delay_equality() {
    std::mt19937_64 rng(0xd31a);
    const planner::Modulation mods[] = {planner::Modulation::Bpsk, planner::Modulation::Qpsk,
                                        planner::Modulation::Psk8, planner::Modulation::Psk16};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 1000 && ok; ++i) {
        planner::LinkConfig link;
        link.generation_size = 1 + rng() % 500;
        link.symbol_bits = 8 * (1 + rng() % 4);
        link.fec_rate = 0.02 + 0.98 * (static_cast<double>(rng() % 1000) / 1000.0);
        link.modulation = mods[rng() % 4];
        link.d_main_cm = 1.0 + static_cast<double>(rng() % 400000) / 100.0;
        const double limit = planner::max_aux_distance_cm(
            link.generation_size, link.symbol_bits, link.fec_rate, link.main_rate_or_default(),
            link.d_main_cm);
        link.d_aux_cm = (0.01 + 0.98 * (static_cast<double>(rng() % 1000) / 1000.0)) * limit;
        const double redundancy = static_cast<double>(1 + rng() % 400);

        const double c_aux = planner::aux_rate(redundancy, link.symbol_bits, link.fec_rate,
                                               link.main_rate_or_default(), link.generation_size,
                                               link.d_main_cm, link.d_aux_cm);
        const planner::Delays d = planner::delays(link, redundancy, c_aux);
        if (std::abs(d.t_aux_s - d.t_main_s) > 1e-12 * d.t_main_s) {
            ok = false;
            detail = fmt_two(d.t_aux_s, d.t_main_s);
        }
    }
    report(4, "delay-matched rate equalizes totals on 1000 random configs", ok, detail);
}

// --- criterion 5: error-free distance table --------------------------------

void criterion_feasibility_table() {
    const bool ok = planner::aux_feasibility_cm("B", planner::Modulation::Psk16) == 100 &&
                    planner::aux_feasibility_cm("B", planner::Modulation::Psk8) == 200 &&
                    planner::aux_feasibility_cm("B", planner::Modulation::Qpsk) == 400 &&
                    planner::aux_feasibility_cm("B", planner::Modulation::Bpsk) == 600 &&
                    planner::aux_feasibility_cm("C", planner::Modulation::Psk16) == 50 &&
                    planner::aux_feasibility_cm("C", planner::Modulation::Psk8) == 150 &&
                    planner::aux_feasibility_cm("C", planner::Modulation::Qpsk) == 300 &&
                    planner::aux_feasibility_cm("C", planner::Modulation::Bpsk) == 450;
    report(5, "error-free auxiliary distance table reproduced exactly", ok);
}

// --- criterion 6: codec properties -----------------------------------------

bool systematic_invariance(std::mt19937_64& rng) {
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 1 + rng() % 32;
        const std::size_t symbol_bytes = 1 + rng() % 4;
        srlnc::Generation g;
        g.symbol_bytes = symbol_bytes;
        g.data.resize(k * symbol_bytes);
        for (auto& b : g.data) {
            b = static_cast<std::uint8_t>(rng() & 0xff);
        }
        const srlnc::CodedGeneration coded = srlnc::encode_generation(g, rng() % 10, rng());
        for (std::size_t i = 0; i < k; ++i) {
            if (!std::equal(coded.native[i].payload.begin(), coded.native[i].payload.end(),
                            g.symbol(i).begin())) {
                return false;
            }
        }
    }
    return true;
}

bool any_k_of_n_exhaustive(std::mt19937_64& rng) {
    for (std::size_t k = 1; k <= 6; ++k) {
        for (std::size_t n = k; n <= 10; ++n) {
            srlnc::Generation g;
            g.symbol_bytes = 1;
            g.data.resize(k);
            for (auto& b : g.data) {
                b = static_cast<std::uint8_t>(rng() & 0xff);
            }
            const srlnc::CodedGeneration coded = srlnc::encode_generation(g, n - k, rng());
            std::vector<const srlnc::CodedSymbol*> all;
            for (const auto& s : coded.native) all.push_back(&s);
            for (const auto& s : coded.redundant) all.push_back(&s);

            std::vector<bool> pick(n, false);
            std::fill(pick.end() - static_cast<std::ptrdiff_t>(k), pick.end(), true);
            do {
                std::vector<srlnc::CodedSymbol> received;
                std::vector<std::vector<std::uint8_t>> rows;
                for (std::size_t i = 0; i < n; ++i) {
                    if (pick[i]) {
                        received.push_back(*all[i]);
                        rows.push_back(all[i]->coefficients);
                    }
                }
                const bool full_rank = oracles::gf_matrix_rank(rows, k) == k;
                const srlnc::DecodeResult r = srlnc::decode_generation(received, k, 1);
                if (full_rank) {
                    if (r.status != srlnc::DecodeStatus::Ok || r.data != g.data) {
                        return false;
                    }
                } else if (r.status != srlnc::DecodeStatus::RankDeficient) {
                    return false;
                }
            } while (std::next_permutation(pick.begin(), pick.end()));
        }
    }
    return true;
}

bool stream_round_trip(std::mt19937_64& rng) {
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t length = trial == 0 ? 0 : rng() % 10240;
        std::vector<std::uint8_t> data(length);
        for (auto& b : data) {
            b = static_cast<std::uint8_t>(rng() & 0xff);
        }
        const std::size_t k = 10;
        const std::size_t redundancy = 4;
        const srlnc::SegmentedStream segmented = srlnc::segment_stream(data, 8, k);

        std::vector<srlnc::Generation> decoded;
        for (const srlnc::Generation& g : segmented.generations) {
            // Recovery is promised for full-rank subsets; re-seed the
            // encoder on the rare singular draw.
            const std::size_t drops = rng() % (redundancy + 1);
            std::vector<std::size_t> order(k);
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);

            std::vector<srlnc::CodedSymbol> received;
            bool full_rank = false;
            for (int attempt = 0; attempt < 32 && !full_rank; ++attempt) {
                const srlnc::CodedGeneration coded =
                    srlnc::encode_generation(g, redundancy, rng());
                received.clear();
                std::vector<std::vector<std::uint8_t>> rows;
                for (std::size_t i = drops; i < k; ++i) {
                    received.push_back(coded.native[order[i]]);
                    rows.push_back(coded.native[order[i]].coefficients);
                }
                for (const auto& sym : coded.redundant) {
                    received.push_back(sym);
                    rows.push_back(sym.coefficients);
                }
                full_rank = oracles::gf_matrix_rank(std::move(rows), k) == k;
            }
            if (!full_rank) {
                return false;
            }
            const srlnc::DecodeResult r = srlnc::decode_generation(received, k, 1);
            if (r.status != srlnc::DecodeStatus::Ok) {
                return false;
            }
            srlnc::Generation out;
            out.symbol_bytes = 1;
            out.data = r.data;
            decoded.push_back(std::move(out));
        }
        if (srlnc::reassemble_stream(decoded, segmented.stream_bytes) != data) {
            return false;
        }
    }
    return true;
}

void criterion_codec() {
    std::mt19937_64 rng(0xc0dec);
    const bool a = systematic_invariance(rng);
    const bool b = any_k_of_n_exhaustive(rng);
    const bool c = stream_round_trip(rng);
    report(6, "codec: systematic invariance, any-K-of-N, stream round trip",
           a && b && c,
           a && b && c ? ""
                       : std::string(a ? "" : "systematic ") + (b ? "" : "any-k ") +
                             (c ? "" : "round-trip"));
}

// --- criterion 7: field arithmetic -----------------------------------------

void criterion_field() {
    bool ok = true;
    for (unsigned a = 1; a < 256 && ok; ++a) {
        ok = gf::mul(static_cast<std::uint8_t>(a), gf::inv(static_cast<std::uint8_t>(a))) == 1;
    }
    for (unsigned a = 0; a < 256 && ok; ++a) {
        for (unsigned b = 0; b < 256 && ok; ++b) {
            ok = gf::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) ==
                 oracles::gf_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
        }
    }
    report(7, "exhaustive inverses and multiplication vs naive reference", ok);
}

// --- criterion 8: simulation vs binomial tail -------------------------------

void criterion_simulation_oracle() {
    struct Setting {
        double p_s;
        long redundancy;
    };
    const Setting settings[] = {{0.42, 43}, {0.42, 30}, {0.10, 15}};
    bool ok = true;
    std::string detail;
    for (const Setting& s : settings) {
        sim::SimConfig config;
        config.link.generation_size = 100;
        config.link.symbol_bits = 8;
        config.link.fec_rate = 0.73;
        config.link.modulation = planner::Modulation::Psk16;
        config.link.d_main_cm = 1150;
        config.link.d_aux_cm = 500;
        config.generations = 10000;
        config.seed = 0xacce;
        config.mode = sim::ErrorMode::Symbol;
        config.symbol_error_rate = s.p_s;
        config.redundancy = s.redundancy;

        const sim::SimReport r = sim::run_simulation(config);
        const double oracle =
            oracles::binomial_tail(100, s.p_s, static_cast<unsigned>(s.redundancy));
        const double sigma = std::sqrt(oracle * (1.0 - oracle) / 10000.0);
        if (std::abs(r.generation_loss_rate - oracle) > 3.0 * sigma) {
            ok = false;
            detail = "P_s=" + std::to_string(s.p_s) + " R=" + std::to_string(s.redundancy) +
                     ": " + fmt_two(r.generation_loss_rate, oracle);
        }
    }
    report(8, "failure rate within 3 sigma of the binomial tail (3 settings)", ok, detail);
}

// --- criterion 9: FEC stub consistency ---------------------------------------

void criterion_fec_filter() {
    const fec::FecParams params{0.73, 100, 8};
    const double target = fec::residual_ser(fec::residual_ber(0.2, params), 8);
    const int generations = 1000; // 1e5 native symbols
    long total = 0;
    double sum_sq = 0.0;
    for (int g = 0; g < generations; ++g) {
        const auto mask = fec::fec_filter(params, 0.2, 147, 0xf17 + g);
        const long erased = std::count(mask.begin(), mask.end(), false);
        total += erased;
        sum_sq += static_cast<double>(erased) * static_cast<double>(erased);
    }
    const double mean = static_cast<double>(total) / generations;
    const double var = (sum_sq - generations * mean * mean) / (generations - 1);
    const double se = std::sqrt(var / generations) / 100.0;
    const double observed = mean / 100.0;
    report(9, "FEC stub erasure rate matches the closed form within 3 sigma",
           std::abs(observed - target) < 3.0 * se, fmt_two(observed, target));
}

// --- criterion 10: byte-identical reruns -------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    const std::string cli = DUALCHAN_CLI_PATH;
    const std::string data = DUALCHAN_DATA_DIR;
    const fs::path dir = fs::temp_directory_path() / "dualchan_acceptance";
    fs::create_directories(dir);

    const fs::path sim1 = dir / "sim1.json";
    const fs::path sim2 = dir / "sim2.json";
    const std::string sim_cmd = cli + " simulate --config " + data +
                                "/configs/simulate_symbol.json --generations 400 --seed 7 "
                                "--mode symbol --per-generation --out ";
    const fs::path sweep1 = dir / "sweep1.csv";
    const fs::path sweep2 = dir / "sweep2.csv";
    const std::string sweep_cmd = cli + " sweep --channel B --modulations 16PSK,8PSK,QPSK,BPSK "
                                  "--dmain 200:2000:50 --daux 500 --profile " +
                                  data + "/channel_b.json --out ";

    bool ok = true;
    for (const auto& [cmd, a, b] : {std::tuple{sim_cmd, sim1, sim2},
                                    std::tuple{sweep_cmd, sweep1, sweep2}}) {
        const int rc1 = std::system((cmd + a.string()).c_str());
        const int rc2 = std::system((cmd + b.string()).c_str());
        if (!WIFEXITED(rc1) || WEXITSTATUS(rc1) != 0 || !WIFEXITED(rc2) ||
            WEXITSTATUS(rc2) != 0) {
            ok = false;
            break;
        }
        const std::string ca = slurp(a);
        if (ca.empty() || ca != slurp(b)) {
            ok = false;
            break;
        }
    }
    report(10, "simulate and sweep reruns are byte-identical", ok);
}

} // namespace

int main() {
    criterion_fec_anchors();
    criterion_code_rates();
    criterion_aux_rates();
    criterion_delay_equality();
    criterion_feasibility_table();
    criterion_codec();
    criterion_field();
    criterion_simulation_oracle();
    criterion_fec_filter();
    criterion_determinism();

    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
