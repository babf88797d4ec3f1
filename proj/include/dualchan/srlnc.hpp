#ifndef DUALCHAN_SRLNC_HPP
#define DUALCHAN_SRLNC_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace dualchan::srlnc {

// Systematic RLNC codec. An input byte stream is segmented into
// generations of K native symbols (s bits each); encoding appends R
// redundant symbols, each a random linear combination of the natives over
// GF(2^8). Native symbols pass through unchanged, so a receiver only has
// to solve for the positions erased in transit. Any K linearly
// independent symbols out of the K+R recover the generation.
//
// All state is per-generation and immutable after construction; distinct
// generations can be encoded/decoded concurrently.

struct Generation {
    std::uint32_t index = 0;
    std::size_t symbol_bytes = 1; // s / 8
    std::vector<std::uint8_t> data; // symbol_count() * symbol_bytes

    std::size_t symbol_count() const {
        return symbol_bytes == 0 ? 0 : data.size() / symbol_bytes;
    }
    std::span<const std::uint8_t> symbol(std::size_t i) const {
        return {data.data() + i * symbol_bytes, symbol_bytes};
    }
};

enum class SymbolKind : std::uint8_t { Native, Redundant };

struct CodedSymbol {
    SymbolKind kind = SymbolKind::Native;
    std::uint32_t index = 0; // native position, or redundant slot
    std::vector<std::uint8_t> coefficients; // length K
    std::vector<std::uint8_t> payload;      // symbol_bytes
};

struct CodedGeneration {
    std::uint32_t index = 0;
    std::size_t symbol_bytes = 1;
    std::uint64_t seed = 0; // redundant coefficient vectors re-derivable from this
    std::vector<CodedSymbol> native;    // K symbols, payloads identical to the source
    std::vector<CodedSymbol> redundant; // R symbols

    std::size_t generation_size() const { return native.size(); }
    std::size_t coded_size() const { return native.size() + redundant.size(); }
};

struct SegmentedStream {
    std::vector<Generation> generations;
    std::uint64_t stream_bytes = 0; // original length; the tail generation is zero-padded
};

// Splits a byte stream into generations of K symbols of symbol_bits each,
// zero-padding the final generation. symbol_bits must be a positive
// multiple of 8. An empty input yields an empty generation list.
SegmentedStream segment_stream(std::span<const std::uint8_t> data,
                               unsigned symbol_bits, std::size_t generation_size);

// Inverse of segment_stream: concatenates generation payloads and strips
// the padding recorded in stream_bytes.
std::vector<std::uint8_t> reassemble_stream(const std::vector<Generation>& generations,
                                            std::uint64_t stream_bytes);

// Coefficient vector of redundant symbol `redundant_index`, re-derived
// from the generation seed. Entries are uniform over all 256 field values.
std::vector<std::uint8_t> redundant_coefficients(std::uint64_t seed,
                                                 std::size_t generation_size,
                                                 std::uint32_t redundant_index);

// Field-linear combination of the generation's symbols under the given
// coefficients, evaluated bytewise.
std::vector<std::uint8_t> linear_combine(const Generation& g,
                                         std::span<const std::uint8_t> coefficients);

// Produces the K natives unchanged plus `redundancy` coded symbols.
// Deterministic for a fixed seed.
CodedGeneration encode_generation(const Generation& g, std::size_t redundancy,
                                  std::uint64_t seed);

enum class DecodeStatus : std::uint8_t {
    Ok,
    InsufficientSymbols, // fewer than K distinct symbols received
    RankDeficient,       // >= K symbols but coefficient rank < K
};

struct DecodeResult {
    DecodeStatus status = DecodeStatus::InsufficientSymbols;
    std::size_t rank = 0;
    std::vector<std::uint8_t> data; // K * symbol_bytes when status == Ok
};

// Recovers the K native payloads from any received subset whose
// coefficient matrix has rank K. Received natives are placed directly;
// only the missing positions are solved by elimination.
DecodeResult decode_generation(std::span<const CodedSymbol> received,
                               std::size_t generation_size, std::size_t symbol_bytes);

struct GaussJordanResult {
    bool solved = false;
    std::size_t rank = 0;
    std::vector<std::vector<std::uint8_t>> solution; // `unknowns` rows when solved
};

// Gauss-Jordan elimination over GF(2^8). `rows` holds coefficient vectors
// of width `unknowns`, `rhs` the payload attached to each row. Returns the
// solution when the rank equals `unknowns`, the achieved rank otherwise.
GaussJordanResult gauss_jordan_solve(std::vector<std::vector<std::uint8_t>> rows,
                                     std::vector<std::vector<std::uint8_t>> rhs,
                                     std::size_t unknowns);

} // namespace dualchan::srlnc

#endif
