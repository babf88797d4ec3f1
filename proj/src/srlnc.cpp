#include "dualchan/srlnc.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "dualchan/gf256.hpp"
#include "dualchan/rng.hpp"

namespace dualchan::srlnc {

namespace {

void check_symbol_shape(unsigned symbol_bits, std::size_t generation_size) {
    if (symbol_bits == 0 || symbol_bits % 8 != 0) {
        throw std::invalid_argument("srlnc: symbol size must be a positive multiple of 8 bits");
    }
    if (generation_size == 0) {
        throw std::invalid_argument("srlnc: generation size must be at least 1");
    }
}

} // namespace

SegmentedStream segment_stream(std::span<const std::uint8_t> data,
                               unsigned symbol_bits, std::size_t generation_size) {
    check_symbol_shape(symbol_bits, generation_size);

    SegmentedStream out;
    out.stream_bytes = data.size();
    if (data.empty()) {
        return out;
    }

    const std::size_t symbol_bytes = symbol_bits / 8;
    const std::size_t generation_bytes = generation_size * symbol_bytes;
    const std::size_t count = (data.size() + generation_bytes - 1) / generation_bytes;

    out.generations.reserve(count);
    for (std::size_t g = 0; g < count; ++g) {
        Generation gen;
        gen.index = static_cast<std::uint32_t>(g);
        gen.symbol_bytes = symbol_bytes;
        gen.data.assign(generation_bytes, 0);
        const std::size_t offset = g * generation_bytes;
        const std::size_t n = std::min(generation_bytes, data.size() - offset);
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(offset), n, gen.data.begin());
        out.generations.push_back(std::move(gen));
    }
    return out;
}

std::vector<std::uint8_t> reassemble_stream(const std::vector<Generation>& generations,
                                            std::uint64_t stream_bytes) {
    std::vector<std::uint8_t> out;
    out.reserve(stream_bytes);
    for (const Generation& g : generations) {
        out.insert(out.end(), g.data.begin(), g.data.end());
    }
    if (out.size() < stream_bytes) {
        throw std::invalid_argument("srlnc: generations shorter than recorded stream length");
    }
    out.resize(stream_bytes);
    return out;
}

std::vector<std::uint8_t> redundant_coefficients(std::uint64_t seed,
                                                 std::size_t generation_size,
                                                 std::uint32_t redundant_index) {
    rng::Engine eng(rng::derive(seed, 0x636f6566u, redundant_index));
    std::vector<std::uint8_t> coeffs(generation_size);
    for (auto& c : coeffs) {
        c = rng::uniform_byte(eng);
    }
    return coeffs;
}

std::vector<std::uint8_t> linear_combine(const Generation& g,
                                         std::span<const std::uint8_t> coefficients) {
    if (coefficients.size() != g.symbol_count()) {
        throw std::invalid_argument("srlnc: coefficient count does not match generation size");
    }
    std::vector<std::uint8_t> payload(g.symbol_bytes, 0);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        if (coefficients[k] == 0) {
            continue;
        }
        const auto sym = g.symbol(k);
        for (std::size_t b = 0; b < g.symbol_bytes; ++b) {
            payload[b] = gf::add(payload[b], gf::mul(coefficients[k], sym[b]));
        }
    }
    return payload;
}

CodedGeneration encode_generation(const Generation& g, std::size_t redundancy,
                                  std::uint64_t seed) {
    const std::size_t k = g.symbol_count();
    if (k == 0) {
        throw std::invalid_argument("srlnc: cannot encode an empty generation");
    }

    CodedGeneration coded;
    coded.index = g.index;
    coded.symbol_bytes = g.symbol_bytes;
    coded.seed = seed;

    coded.native.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        CodedSymbol sym;
        sym.kind = SymbolKind::Native;
        sym.index = static_cast<std::uint32_t>(i);
        sym.coefficients.assign(k, 0);
        sym.coefficients[i] = 1;
        const auto payload = g.symbol(i);
        sym.payload.assign(payload.begin(), payload.end());
        coded.native.push_back(std::move(sym));
    }

    coded.redundant.reserve(redundancy);
    for (std::size_t r = 0; r < redundancy; ++r) {
        CodedSymbol sym;
        sym.kind = SymbolKind::Redundant;
        sym.index = static_cast<std::uint32_t>(r);
        sym.coefficients = redundant_coefficients(seed, k, sym.index);
        sym.payload = linear_combine(g, sym.coefficients);
        coded.redundant.push_back(std::move(sym));
    }
    return coded;
}

GaussJordanResult gauss_jordan_solve(std::vector<std::vector<std::uint8_t>> rows,
                                     std::vector<std::vector<std::uint8_t>> rhs,
                                     std::size_t unknowns) {
    if (rows.size() != rhs.size()) {
        throw std::invalid_argument("srlnc: row/rhs count mismatch");
    }
    for (const auto& row : rows) {
        if (row.size() != unknowns) {
            throw std::invalid_argument("srlnc: row width does not match unknown count");
        }
    }

    GaussJordanResult result;
    std::size_t pivot_row = 0;
    std::vector<std::size_t> pivot_of_column(unknowns, SIZE_MAX);

    for (std::size_t col = 0; col < unknowns && pivot_row < rows.size(); ++col) {
        std::size_t found = SIZE_MAX;
        for (std::size_t r = pivot_row; r < rows.size(); ++r) {
            if (rows[r][col] != 0) {
                found = r;
                break;
            }
        }
        if (found == SIZE_MAX) {
            continue;
        }
        std::swap(rows[pivot_row], rows[found]);
        std::swap(rhs[pivot_row], rhs[found]);

        const std::uint8_t pivot_inv = gf::inv(rows[pivot_row][col]);
        for (auto& v : rows[pivot_row]) {
            v = gf::mul(v, pivot_inv);
        }
        for (auto& v : rhs[pivot_row]) {
            v = gf::mul(v, pivot_inv);
        }

        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pivot_row || rows[r][col] == 0) {
                continue;
            }
            const std::uint8_t factor = rows[r][col];
            for (std::size_t c = 0; c < unknowns; ++c) {
                rows[r][c] = gf::add(rows[r][c], gf::mul(factor, rows[pivot_row][c]));
            }
            for (std::size_t b = 0; b < rhs[r].size(); ++b) {
                rhs[r][b] = gf::add(rhs[r][b], gf::mul(factor, rhs[pivot_row][b]));
            }
        }

        pivot_of_column[col] = pivot_row;
        ++pivot_row;
    }

    result.rank = pivot_row;
    if (result.rank < unknowns) {
        return result;
    }

    result.solved = true;
    result.solution.resize(unknowns);
    for (std::size_t col = 0; col < unknowns; ++col) {
        result.solution[col] = std::move(rhs[pivot_of_column[col]]);
    }
    return result;
}

DecodeResult decode_generation(std::span<const CodedSymbol> received,
                               std::size_t generation_size, std::size_t symbol_bytes) {
    DecodeResult result;

    // Deduplicate by identity; retransmitted copies add no information.
    std::set<std::pair<SymbolKind, std::uint32_t>> seen;
    std::vector<const CodedSymbol*> unique;
    unique.reserve(received.size());
    for (const CodedSymbol& sym : received) {
        if (sym.coefficients.size() != generation_size || sym.payload.size() != symbol_bytes) {
            throw std::invalid_argument("srlnc: received symbol shape mismatch");
        }
        if (seen.emplace(sym.kind, sym.index).second) {
            unique.push_back(&sym);
        }
    }

    if (unique.size() < generation_size) {
        result.status = DecodeStatus::InsufficientSymbols;
        result.rank = 0;
        return result;
    }

    std::vector<const CodedSymbol*> natives(generation_size, nullptr);
    std::vector<const CodedSymbol*> combined;
    for (const CodedSymbol* sym : unique) {
        if (sym->kind == SymbolKind::Native && sym->index < generation_size) {
            natives[sym->index] = sym;
        } else {
            combined.push_back(sym);
        }
    }

    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < generation_size; ++i) {
        if (natives[i] == nullptr) {
            missing.push_back(i);
        }
    }

    result.data.assign(generation_size * symbol_bytes, 0);
    for (std::size_t i = 0; i < generation_size; ++i) {
        if (natives[i] != nullptr) {
            std::copy(natives[i]->payload.begin(), natives[i]->payload.end(),
                      result.data.begin() + static_cast<std::ptrdiff_t>(i * symbol_bytes));
        }
    }

    if (missing.empty()) {
        result.status = DecodeStatus::Ok;
        result.rank = generation_size;
        return result;
    }

    // Shrink the system to the missing columns: subtract the contribution
    // of every received native from each combined payload.
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<std::vector<std::uint8_t>> rhs;
    rows.reserve(combined.size());
    rhs.reserve(combined.size());
    for (const CodedSymbol* sym : combined) {
        std::vector<std::uint8_t> row(missing.size());
        for (std::size_t m = 0; m < missing.size(); ++m) {
            row[m] = sym->coefficients[missing[m]];
        }
        std::vector<std::uint8_t> value = sym->payload;
        for (std::size_t i = 0; i < generation_size; ++i) {
            const std::uint8_t c = sym->coefficients[i];
            if (natives[i] == nullptr || c == 0) {
                continue;
            }
            for (std::size_t b = 0; b < symbol_bytes; ++b) {
                value[b] = gf::add(value[b], gf::mul(c, natives[i]->payload[b]));
            }
        }
        rows.push_back(std::move(row));
        rhs.push_back(std::move(value));
    }

    GaussJordanResult solved = gauss_jordan_solve(std::move(rows), std::move(rhs), missing.size());
    result.rank = generation_size - missing.size() + solved.rank;
    if (!solved.solved) {
        result.status = DecodeStatus::RankDeficient;
        result.data.clear();
        return result;
    }

    for (std::size_t m = 0; m < missing.size(); ++m) {
        std::copy(solved.solution[m].begin(), solved.solution[m].end(),
                  result.data.begin() + static_cast<std::ptrdiff_t>(missing[m] * symbol_bytes));
    }
    result.status = DecodeStatus::Ok;
    return result;
}

} // namespace dualchan::srlnc
