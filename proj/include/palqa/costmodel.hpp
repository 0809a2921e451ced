#pragma once

// Gate-budget rate model.
//
//   B_total = q_ones + B_state + B_sign + B_aux + B_gpp,   gpp = B_total / I_s
//
// q_ones   set bits over all transmitted magnitudes
// B_state  position connections: every coefficient connects n_x + n_y - 1
//          position qubits (the X LSB is swapped out), plus one connection per
//          1 in the LSB plane
// B_sign   one per nonzero coefficient (or one per negative one)
// B_aux    aux connect + reset per coefficient
// B_gpp    block addressing: ceil(log2 Bw) + ceil(log2 Bh) bits for every
//          block holding at least one nonzero coefficient. This is the least
//          pinned-down term of the model and lives only in block_address_cost().

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <vector>

#include "palqa/circuit.hpp"
#include "palqa/error.hpp"
#include "palqa/lsbswap.hpp"
#include "palqa/transform.hpp"

namespace palqa {

struct GateBudget {
    std::uint64_t q_ones = 0;
    std::uint64_t b_state = 0;
    std::uint64_t b_sign = 0;
    std::uint64_t b_aux = 0;
    std::uint64_t b_gpp = 0;
    std::uint64_t b_total = 0;
    std::uint64_t pixels = 0; // I_s

    friend bool operator==(const GateBudget&, const GateBudget&) = default;
};

enum class StateModel {
    distributed, // Tc_nz*(n_x+n_y-1) + ones
    literal,     // Tc_nz*(n_x+n_y-1+ones)
};

enum class SignModel {
    per_coefficient,
    per_negative,
};

struct CostOptions {
    StateModel state = StateModel::distributed;
    SignModel sign = SignModel::per_coefficient;
};

struct BlockGrid {
    int cols = 1;
    int rows = 1;
};

inline std::uint64_t count_q_ones(std::span<const SparseCoeff> coeffs) {
    std::uint64_t n = 0;
    for (const auto& c : coeffs) n += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(c.magnitude)));
    return n;
}

inline std::uint64_t count_b_state(std::span<const SparseCoeff> coeffs, const OnesList& ones,
                                   const QubitLayout& layout = layouts::block(),
                                   StateModel model = StateModel::distributed) {
    if (ones.total != coeffs.size()) throw InvalidArgument("b_state: ones list does not match coefficients");
    const std::uint64_t tc = coeffs.size();
    if (tc == 0) return 0;
    const std::uint64_t per = static_cast<std::uint64_t>(layout.x_bits + layout.y_bits - 1);
    const std::uint64_t n1 = ones.indices.size();
    return model == StateModel::literal ? tc * (per + n1) : tc * per + n1;
}

/// B_state without the LSB swap (every position qubit connected).
inline std::uint64_t count_b_state_unswapped(std::span<const SparseCoeff> coeffs,
                                             const QubitLayout& layout = layouts::block()) {
    return coeffs.size() * static_cast<std::uint64_t>(layout.x_bits + layout.y_bits);
}

inline std::uint64_t count_b_sign(std::span<const SparseCoeff> coeffs, SignModel model) {
    if (model == SignModel::per_coefficient) return coeffs.size();
    return static_cast<std::uint64_t>(
        std::count_if(coeffs.begin(), coeffs.end(), [](const SparseCoeff& c) { return c.sign < 0; }));
}

inline std::uint64_t block_address_cost(std::span<const SparseCoeff> coeffs, BlockGrid grid) {
    std::set<std::uint32_t> blocks;
    for (const auto& c : coeffs) blocks.insert(c.block_index);
    const auto bits = static_cast<std::uint64_t>(ceil_log2(static_cast<std::uint64_t>(grid.cols)) +
                                                 ceil_log2(static_cast<std::uint64_t>(grid.rows)));
    return blocks.size() * bits;
}

inline GateBudget count_b_total(std::span<const SparseCoeff> coeffs, const OnesList& ones, BlockGrid grid,
                                std::uint64_t pixels, const CostOptions& opt = {},
                                const QubitLayout& layout = layouts::block()) {
    GateBudget b;
    b.q_ones = count_q_ones(coeffs);
    b.b_state = count_b_state(coeffs, ones, layout, opt.state);
    b.b_sign = count_b_sign(coeffs, opt.sign);
    b.b_aux = 2 * static_cast<std::uint64_t>(coeffs.size());
    b.b_gpp = block_address_cost(coeffs, grid);
    b.b_total = b.q_ones + b.b_state + b.b_sign + b.b_aux + b.b_gpp;
    b.pixels = pixels;
    return b;
}

inline double gpp(const GateBudget& b) {
    if (b.pixels == 0) throw InvalidArgument("gpp: zero pixel count");
    return static_cast<double>(b.b_total) / static_cast<double>(b.pixels);
}

/// NZ-NEQR baseline over full-image positions of a block-aligned width x height
/// raster: popcount + (ceil(log2 W)+1) + (ceil(log2 H)+1) + sign + aux per
/// coefficient, no LSB discount, no block addressing.
inline GateBudget nzneqr_budget(std::span<const SparseCoeff> coeffs, int width, int height, std::uint64_t pixels,
                                SignModel sign = SignModel::per_coefficient) {
    const QubitLayout l = layouts::nzneqr(width, height);
    GateBudget b;
    b.q_ones = count_q_ones(coeffs);
    b.b_state = coeffs.size() * static_cast<std::uint64_t>(l.x_bits + l.y_bits);
    b.b_sign = count_b_sign(coeffs, sign);
    b.b_aux = coeffs.size();
    b.b_gpp = 0;
    b.b_total = b.q_ones + b.b_state + b.b_sign + b.b_aux + b.b_gpp;
    b.pixels = pixels;
    return b;
}

// ---------------------------------------------------------------------------
// JPEG-style entropy-coded bit estimate

inline constexpr std::array<int, kBlockArea> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

inline constexpr int kEob = 0x00;
inline constexpr int kZrl = 0xF0;

/// Number of magnitude bits (JPEG "category") of v.
inline int magnitude_category(std::int64_t v) {
    const std::uint64_t a = static_cast<std::uint64_t>(v < 0 ? -v : v);
    return static_cast<int>(std::bit_width(a));
}

struct JpegSymbols {
    std::map<int, std::uint64_t> dc; // category -> frequency
    std::map<int, std::uint64_t> ac; // (run << 4 | size) -> frequency
    std::uint64_t extra_bits = 0;    // appended magnitude bits
};

/// Zigzag run/size symbolization with DC differences, ZRL and EOB.
inline JpegSymbols jpeg_symbols(std::span<const QuantBlock> blocks) {
    JpegSymbols s;
    std::int64_t prev_dc = 0;
    for (const auto& b : blocks) {
        const std::int64_t dc = b.q[0];
        const int dc_cat = magnitude_category(dc - prev_dc);
        prev_dc = dc;
        ++s.dc[dc_cat];
        s.extra_bits += static_cast<std::uint64_t>(dc_cat);

        int last = 0;
        for (int k = 1; k < kBlockArea; ++k)
            if (b.q[static_cast<std::size_t>(kZigzag[static_cast<std::size_t>(k)])] != 0) last = k;
        int run = 0;
        for (int k = 1; k <= last; ++k) {
            const std::int32_t v = b.q[static_cast<std::size_t>(kZigzag[static_cast<std::size_t>(k)])];
            if (v == 0) {
                ++run;
                continue;
            }
            while (run > 15) {
                ++s.ac[kZrl];
                run -= 16;
            }
            const int cat = magnitude_category(v);
            ++s.ac[(run << 4) | cat];
            s.extra_bits += static_cast<std::uint64_t>(cat);
            run = 0;
        }
        if (last < kBlockArea - 1) ++s.ac[kEob];
    }
    return s;
}

/// Optimal prefix-code lengths for the given frequencies (a single symbol gets length 1).
inline std::map<int, int> huffman_code_lengths(const std::map<int, std::uint64_t>& freq) {
    std::map<int, int> lengths;
    if (freq.empty()) return lengths;
    if (freq.size() == 1) {
        lengths[freq.begin()->first] = 1;
        return lengths;
    }
    struct Node {
        std::uint64_t weight;
        std::size_t id;
    };
    auto cmp = [](const Node& a, const Node& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.id > b.id;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
    std::vector<int> parent;
    std::vector<int> symbols;
    for (const auto& [sym, f] : freq) {
        heap.push({f, parent.size()});
        parent.push_back(-1);
        symbols.push_back(sym);
    }
    while (heap.size() > 1) {
        const Node a = heap.top();
        heap.pop();
        const Node b = heap.top();
        heap.pop();
        const std::size_t id = parent.size();
        parent.push_back(-1);
        parent[a.id] = static_cast<int>(id);
        parent[b.id] = static_cast<int>(id);
        heap.push({a.weight + b.weight, id});
    }
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        int depth = 0;
        for (int p = parent[i]; p >= 0; p = parent[static_cast<std::size_t>(p)]) ++depth;
        lengths[symbols[i]] = depth;
    }
    return lengths;
}

inline std::uint64_t coded_bits(const std::map<int, std::uint64_t>& freq) {
    const auto lengths = huffman_code_lengths(freq);
    std::uint64_t bits = 0;
    for (const auto& [sym, f] : freq) bits += f * static_cast<std::uint64_t>(lengths.at(sym));
    return bits;
}

/// Bits of a JPEG-style stream over the quantized blocks with per-image
/// optimal Huffman tables (DC and AC tables separate). Table storage excluded.
inline std::uint64_t jpeg_like_bits(std::span<const QuantBlock> blocks) {
    const auto s = jpeg_symbols(blocks);
    return coded_bits(s.dc) + coded_bits(s.ac) + s.extra_bits;
}

} // namespace palqa
