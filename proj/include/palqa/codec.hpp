#pragma once

// End-to-end encoder/decoder and rate-distortion sweeps.
//
// encode: pad -> partition -> dct2 -> quantize -> extract_sparse -> split_lsb
//         -> encode_ones -> serialize (+ gate budget, optional circuits)
// decode: deserialize -> regenerate -> join -> adder (scatter) -> dequantize
//         -> idct2 -> merge -> crop

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "palqa/circuit.hpp"
#include "palqa/costmodel.hpp"
#include "palqa/image.hpp"
#include "palqa/lsbswap.hpp"
#include "palqa/payload.hpp"
#include "palqa/transform.hpp"

namespace palqa {

struct QuantizedImage {
    int width = 0; // original dimensions
    int height = 0;
    int padded_width = 0;
    int padded_height = 0;
    int Q = 1;
    std::vector<QuantBlock> blocks; // raster order

    BlockGrid grid() const { return {padded_width / kBlockSide, padded_height / kBlockSide}; }
    std::uint64_t pixels() const {
        return static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    }
};

inline QuantizedImage quantize_image(const GrayImage& img, int Q) {
    if (Q < 1) throw InvalidArgument("quantization factor must be >= 1");
    const GrayImage padded = pad_to_blocks(img);
    QuantizedImage out{img.width(), img.height(), padded.width(), padded.height(), Q, {}};
    const auto blocks = partition(padded);
    out.blocks.reserve(blocks.size());
    for (const auto& b : blocks) out.blocks.push_back(quantize(dct2(b), Q));
    return out;
}

/// dequantize -> idct2 -> merge -> crop over raster-ordered quantized blocks.
inline GrayImage reconstruct_image(std::span<const QuantBlock> blocks, int width, int height, int Q) {
    const int pw = blocks_along(width) * kBlockSide;
    const int ph = blocks_along(height) * kBlockSide;
    const int cols = pw / kBlockSide;
    if (blocks.size() != static_cast<std::size_t>(cols) * static_cast<std::size_t>(ph / kBlockSide))
        throw InvalidArgument("reconstruct: block count does not match dimensions");
    std::vector<PixelBlock> pixels;
    pixels.reserve(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        PixelBlock b = idct2(dequantize(blocks[i], Q));
        b.origin = {static_cast<int>(i) / cols, static_cast<int>(i) % cols};
        pixels.push_back(b);
    }
    return crop(merge(pixels, pw, ph), width, height);
}

/// The plain transform codec without the sparse/LSB/payload stages.
inline GrayImage classical_reference(const GrayImage& img, int Q) {
    const auto qi = quantize_image(img, Q);
    return reconstruct_image(qi.blocks, qi.width, qi.height, Q);
}

struct CircuitSummary {
    std::size_t blocks = 0; // circuits built (nonempty blocks)
    GateCounts gates;
    std::size_t position_connections = 0;
    std::size_t trash_touches = 0;
};

struct EncodeOptions {
    CostOptions cost;
    bool build_circuits = false;
};

struct EncodeResult {
    std::vector<std::uint8_t> payload;
    GateBudget budget;
    CircuitSummary circuits;
    std::size_t tc_nz = 0;
    std::size_t ones_count = 0;
    std::size_t saturated = 0;
};

/// Splits canonical-order coefficients into per-block runs and renumbers
/// them as block 0, the form the block circuit builders take.
inline std::vector<std::vector<SparseCoeff>> coefficients_by_block(std::span<const SparseCoeff> coeffs) {
    std::vector<std::vector<SparseCoeff>> runs;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i == 0 || coeffs[i].block_index != coeffs[i - 1].block_index) runs.emplace_back();
        SparseCoeff c = coeffs[i];
        c.block_index = 0;
        runs.back().push_back(c);
    }
    return runs;
}

inline EncodeResult encode(const GrayImage& img, int Q, const EncodeOptions& opt = {}) {
    const auto qi = quantize_image(img, Q);
    const auto sparse = extract_sparse(qi.blocks);
    const auto split = split_lsb(std::span<const SparseCoeff>(sparse.coeffs));
    const OnesList ones = encode_ones(split.plane);

    EncodeResult r;
    r.payload = serialize(make_contents(sparse.coeffs, split.x_high, ones, qi.width, qi.height, Q));
    r.budget = count_b_total(sparse.coeffs, ones, qi.grid(), qi.pixels(), opt.cost);
    r.tc_nz = sparse.coeffs.size();
    r.ones_count = ones.indices.size();
    r.saturated = sparse.saturated;

    if (opt.build_circuits) {
        const int trash = *layouts::palqa_block().trash_qubit();
        for (const auto& run : coefficients_by_block(sparse.coeffs)) {
            const Circuit c = build_palqa(run);
            ++r.circuits.blocks;
            r.circuits.gates += count_gates(c);
            r.circuits.position_connections += position_connections(c);
            r.circuits.trash_touches += gates_touching(c, trash);
        }
    }
    return r;
}

inline GrayImage decode(std::span<const std::uint8_t> payload) {
    const PayloadContents p = deserialize(payload);
    const auto coeffs = restore_coeffs(p);
    const auto blocks = scatter_sparse(coeffs, block_count_for(p.width, p.height));
    return reconstruct_image(blocks, p.width, p.height, p.Q);
}

// ---------------------------------------------------------------------------
// Rate-distortion sweep

struct RDPoint {
    std::string method;
    int Q = 1;
    double gpp = 0.0;
    double bpp = 0.0;
    double psnr_db = 0.0;
    GateBudget budget;
    std::size_t tc_nz = 0;
    std::size_t saturated = 0;
};

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> m{"jpeg_like", "nzneqr", "palqa"};
    return m;
}

/// Bits of an uncompressed NZ-NEQR record stream: header plus, per
/// coefficient, full-image X and Y positions, sign and 8-bit magnitude.
inline std::uint64_t nzneqr_stream_bits(std::size_t tc_nz, int padded_width, int padded_height) {
    const QubitLayout l = layouts::nzneqr(padded_width, padded_height);
    return 8 * kHeaderBytes +
           tc_nz * static_cast<std::uint64_t>(l.x_bits + l.y_bits + kSignBits + kMagnitudeBits);
}

/// One point per (method, Q), sorted by method name then Q.
///
/// palqa      gpp from the gate budget, bpp from the serialized payload
/// nzneqr     gpp from the NZ-NEQR budget, bpp from nzneqr_stream_bits
/// jpeg_like  entropy-coded bits of the same quantized blocks; gpp reported
///            equal to bpp (one connection per transmitted bit)
/// All three share the quantized coefficients, hence the same PSNR.
inline std::vector<RDPoint> rd_sweep(const GrayImage& img, std::span<const int> Qs,
                                     std::span<const std::string> methods, const CostOptions& cost = {}) {
    if (Qs.empty()) throw InvalidArgument("rd_sweep: empty Q list");
    if (methods.empty()) throw InvalidArgument("rd_sweep: empty method list");
    for (const auto& m : methods)
        if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
            throw InvalidArgument("rd_sweep: unknown method '" + m + "'");

    std::vector<RDPoint> points;
    for (int Q : Qs) {
        const auto qi = quantize_image(img, Q);
        const auto sparse = extract_sparse(qi.blocks);
        const auto split = split_lsb(std::span<const SparseCoeff>(sparse.coeffs));
        const OnesList ones = encode_ones(split.plane);
        const auto payload = serialize(make_contents(sparse.coeffs, split.x_high, ones, qi.width, qi.height, Q));
        const double quality = psnr(img, decode(payload));
        const double pixels = static_cast<double>(qi.pixels());

        for (const auto& m : methods) {
            RDPoint pt;
            pt.method = m;
            pt.Q = Q;
            pt.psnr_db = quality;
            pt.tc_nz = sparse.coeffs.size();
            pt.saturated = sparse.saturated;
            if (m == "palqa") {
                pt.budget = count_b_total(sparse.coeffs, ones, qi.grid(), qi.pixels(), cost);
                pt.gpp = gpp(pt.budget);
                pt.bpp = bpp(payload.size(), qi.width, qi.height);
            } else if (m == "nzneqr") {
                pt.budget = nzneqr_budget(sparse.coeffs, qi.padded_width, qi.padded_height, qi.pixels(), cost.sign);
                pt.gpp = gpp(pt.budget);
                pt.bpp = static_cast<double>(nzneqr_stream_bits(sparse.coeffs.size(), qi.padded_width,
                                                                qi.padded_height)) / pixels;
            } else {
                pt.budget.pixels = qi.pixels();
                pt.bpp = static_cast<double>(jpeg_like_bits(qi.blocks)) / pixels;
                pt.gpp = pt.bpp;
            }
            points.push_back(std::move(pt));
        }
    }
    std::stable_sort(points.begin(), points.end(), [](const RDPoint& a, const RDPoint& b) {
        return std::tie(a.method, a.Q) < std::tie(b.method, b.Q);
    });
    return points;
}

inline constexpr const char* kRdCsvHeader =
    "method,Q,gpp,bpp,psnr_db,q_ones,b_state,b_sign,b_aux,b_gpp,b_total,tc_nz,saturated";

inline std::string format_real(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string rd_csv(std::span<const RDPoint> points) {
    std::string out = std::string(kRdCsvHeader) + "\n";
    for (const auto& p : points) {
        out += p.method + "," + std::to_string(p.Q) + "," + format_real(p.gpp) + "," + format_real(p.bpp) + "," +
               format_real(p.psnr_db) + "," + std::to_string(p.budget.q_ones) + "," +
               std::to_string(p.budget.b_state) + "," + std::to_string(p.budget.b_sign) + "," +
               std::to_string(p.budget.b_aux) + "," + std::to_string(p.budget.b_gpp) + "," +
               std::to_string(p.budget.b_total) + "," + std::to_string(p.tc_nz) + "," +
               std::to_string(p.saturated) + "\n";
    }
    return out;
}

} // namespace palqa
