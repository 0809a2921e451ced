#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "palqa/error.hpp"
#include "palqa/image.hpp"

namespace palqa {

/// Real DCT coefficients, row-major: index u*8+v with u the vertical
/// (row) frequency and v the horizontal (column) frequency.
struct CoeffBlock {
    std::array<double, kBlockArea> values{};
};

/// Quantized coefficients, same indexing as CoeffBlock.
struct QuantBlock {
    std::array<std::int32_t, kBlockArea> q{};
    friend bool operator==(const QuantBlock&, const QuantBlock&) = default;
};

/// One nonzero quantized coefficient. `x` is the within-block column, `y` the row.
struct SparseCoeff {
    std::uint32_t block_index = 0;
    std::uint8_t x = 0;
    std::uint8_t y = 0;
    std::int8_t sign = 1; // +1 or -1
    std::uint8_t magnitude = 1;

    std::uint64_t order_key() const noexcept {
        return (static_cast<std::uint64_t>(block_index) << 6) |
               static_cast<std::uint64_t>(y) << 3 | x;
    }
    friend bool operator==(const SparseCoeff&, const SparseCoeff&) = default;
};

namespace detail {

struct DctBasis {
    // basis[u][x] = alpha(u) * cos((2x+1) u pi / 16)
    std::array<std::array<double, kBlockSide>, kBlockSide> basis{};

    DctBasis() {
        for (int u = 0; u < kBlockSide; ++u) {
            const double alpha = u == 0 ? std::sqrt(1.0 / kBlockSide) : std::sqrt(2.0 / kBlockSide);
            for (int x = 0; x < kBlockSide; ++x)
                basis[u][x] = alpha * std::cos((2.0 * x + 1.0) * u * std::numbers::pi /
                                               (2.0 * kBlockSide));
        }
    }
};

inline const DctBasis& dct_basis() {
    static const DctBasis instance;
    return instance;
}

} // namespace detail

/// Orthonormal separable 2-D DCT-II of a real 8x8 array (no level shift).
inline CoeffBlock dct2_real(const std::array<double, kBlockArea>& samples) {
    const auto& c = detail::dct_basis().basis;
    std::array<double, kBlockArea> rows{}; // rows[y*8+v] = sum_x samples[y][x] c[v][x]
    for (int y = 0; y < kBlockSide; ++y)
        for (int v = 0; v < kBlockSide; ++v) {
            double s = 0.0;
            for (int x = 0; x < kBlockSide; ++x) s += samples[y * kBlockSide + x] * c[v][x];
            rows[y * kBlockSide + v] = s;
        }
    CoeffBlock out;
    for (int u = 0; u < kBlockSide; ++u)
        for (int v = 0; v < kBlockSide; ++v) {
            double s = 0.0;
            for (int y = 0; y < kBlockSide; ++y) s += c[u][y] * rows[y * kBlockSide + v];
            out.values[u * kBlockSide + v] = s;
        }
    return out;
}

/// Inverse of dct2_real.
inline std::array<double, kBlockArea> idct2_real(const CoeffBlock& coeffs) {
    const auto& c = detail::dct_basis().basis;
    std::array<double, kBlockArea> cols{}; // cols[y*8+v] = sum_u c[u][y] F[u][v]
    for (int y = 0; y < kBlockSide; ++y)
        for (int v = 0; v < kBlockSide; ++v) {
            double s = 0.0;
            for (int u = 0; u < kBlockSide; ++u) s += c[u][y] * coeffs.values[u * kBlockSide + v];
            cols[y * kBlockSide + v] = s;
        }
    std::array<double, kBlockArea> out{};
    for (int y = 0; y < kBlockSide; ++y)
        for (int x = 0; x < kBlockSide; ++x) {
            double s = 0.0;
            for (int v = 0; v < kBlockSide; ++v) s += cols[y * kBlockSide + v] * c[v][x];
            out[y * kBlockSide + x] = s;
        }
    return out;
}

/// DCT of (sample - 128).
inline CoeffBlock dct2(const PixelBlock& block) {
    std::array<double, kBlockArea> shifted{};
    for (std::size_t i = 0; i < shifted.size(); ++i)
        shifted[i] = static_cast<double>(block.samples[i]) - 128.0;
    return dct2_real(shifted);
}

/// Inverse DCT, +128, round to nearest, clamp to [0, 255]. The origin is left default.
inline PixelBlock idct2(const CoeffBlock& coeffs) {
    const auto spatial = idct2_real(coeffs);
    PixelBlock out;
    for (std::size_t i = 0; i < spatial.size(); ++i) {
        const double v = std::round(spatial[i] + 128.0);
        out.samples[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return out;
}

/// round-half-away-from-zero(c / Q)
inline QuantBlock quantize(const CoeffBlock& coeffs, int Q) {
    if (Q < 1) throw InvalidArgument("quantization factor must be >= 1");
    QuantBlock out;
    for (std::size_t i = 0; i < coeffs.values.size(); ++i)
        out.q[i] = static_cast<std::int32_t>(std::round(coeffs.values[i] / Q));
    return out;
}

inline CoeffBlock dequantize(const QuantBlock& qb, int Q) {
    if (Q < 1) throw InvalidArgument("quantization factor must be >= 1");
    CoeffBlock out;
    for (std::size_t i = 0; i < qb.q.size(); ++i)
        out.values[i] = static_cast<double>(qb.q[i]) * Q;
    return out;
}

inline constexpr std::uint32_t kMaxMagnitude = 255;

struct SparseCoeffs {
    std::vector<SparseCoeff> coeffs;
    std::size_t saturated = 0; // entries whose |q| exceeded kMaxMagnitude
};

/// Nonzero entries in canonical order (block, then y, then x). Magnitudes
/// above 255 are clamped and counted.
inline SparseCoeffs extract_sparse(std::span<const QuantBlock> blocks) {
    SparseCoeffs out;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int y = 0; y < kBlockSide; ++y) {
            for (int x = 0; x < kBlockSide; ++x) {
                const std::int32_t v = blocks[b].q[static_cast<std::size_t>(y * kBlockSide + x)];
                if (v == 0) continue;
                std::uint32_t mag = static_cast<std::uint32_t>(v < 0 ? -static_cast<std::int64_t>(v) : v);
                if (mag > kMaxMagnitude) {
                    mag = kMaxMagnitude;
                    ++out.saturated;
                }
                out.coeffs.push_back(SparseCoeff{static_cast<std::uint32_t>(b),
                                                 static_cast<std::uint8_t>(x),
                                                 static_cast<std::uint8_t>(y),
                                                 static_cast<std::int8_t>(v < 0 ? -1 : 1),
                                                 static_cast<std::uint8_t>(mag)});
            }
        }
    }
    return out;
}

/// The decoder-side "adder": scatters sparse coefficients into zeroed blocks.
inline std::vector<QuantBlock> scatter_sparse(std::span<const SparseCoeff> coeffs,
                                              std::size_t block_count) {
    std::vector<QuantBlock> blocks(block_count);
    for (const auto& c : coeffs) {
        if (c.block_index >= block_count || c.x >= kBlockSide || c.y >= kBlockSide)
            throw InvalidArgument("scatter: coefficient position out of range");
        auto& slot = blocks[c.block_index].q[static_cast<std::size_t>(c.y * kBlockSide + c.x)];
        if (slot != 0) throw InvalidArgument("scatter: duplicate coefficient position");
        slot = c.sign * static_cast<std::int32_t>(c.magnitude);
    }
    return blocks;
}

} // namespace palqa
