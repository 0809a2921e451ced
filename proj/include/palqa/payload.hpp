#pragma once

// Compressed stream layout. Integers big-endian, bits MSB-first.
//
//   offset  size  field
//   0       4     magic "PALQ"
//   4       1     version (1)
//   5       1     block size (8)
//   6       2     width
//   8       2     height
//   10      2     Q
//   12      4     coefficient count
//   16      4     ones count
//   20      ...   coefficient records, then ones indices, zero-padded to a byte
//
// Record: block index (ceil(log2 nblocks) bits), y (4), x_high (3),
//         sign (1, set = negative), magnitude (8).
// Ones index: ceil(log2 max(coeff_count, 2)) bits each.

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "palqa/circuit.hpp"
#include "palqa/error.hpp"
#include "palqa/lsbswap.hpp"
#include "palqa/transform.hpp"

namespace palqa {

inline constexpr std::array<std::uint8_t, 4> kPayloadMagic = {'P', 'A', 'L', 'Q'};
inline constexpr std::uint8_t kPayloadVersion = 1;
inline constexpr std::size_t kHeaderBytes = 20;

inline constexpr int kYBits = 4;
inline constexpr int kXHighBits = 3;
inline constexpr int kSignBits = 1;
inline constexpr int kMagnitudeBits = 8;

class BitWriter {
public:
    void put(std::uint64_t value, int bits) {
        for (int b = bits - 1; b >= 0; --b) {
            if (fill_ == 0) bytes_.push_back(0);
            if ((value >> b) & 1U) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> fill_);
            fill_ = (fill_ + 1) % 8;
        }
    }
    void put_be(std::uint64_t value, int bytes) { put(value, bytes * 8); }
    void put_bytes(std::span<const std::uint8_t> raw) {
        for (auto b : raw) put(b, 8);
    }
    std::vector<std::uint8_t> finish() && { return std::move(bytes_); }
    std::size_t bit_count() const noexcept { return bytes_.size() * 8 - (fill_ == 0 ? 0 : 8 - fill_); }

private:
    std::vector<std::uint8_t> bytes_;
    int fill_ = 0; // bits used in the last byte, 0 when byte-aligned
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t get(int bits) {
        if (bits < 0 || remaining() < static_cast<std::size_t>(bits)) throw FormatError("payload: truncated stream");
        std::uint64_t v = 0;
        for (int b = 0; b < bits; ++b) {
            const std::uint8_t byte = bytes_[pos_ / 8];
            v = (v << 1) | ((byte >> (7 - pos_ % 8)) & 1U);
            ++pos_;
        }
        return v;
    }
    std::size_t remaining() const noexcept { return bytes_.size() * 8 - pos_; }
    std::size_t position() const noexcept { return pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

struct CoeffRecord {
    std::uint32_t block_index = 0;
    std::uint8_t y = 0;
    std::uint8_t x_high = 0;
    bool negative = false;
    std::uint8_t magnitude = 1;
    friend bool operator==(const CoeffRecord&, const CoeffRecord&) = default;
};

struct PayloadContents {
    int width = 0;
    int height = 0;
    int Q = 1;
    std::vector<CoeffRecord> records;
    OnesList ones;
    friend bool operator==(const PayloadContents&, const PayloadContents&) = default;
};

inline std::uint64_t block_count_for(int width, int height) {
    return static_cast<std::uint64_t>(blocks_along(width)) * static_cast<std::uint64_t>(blocks_along(height));
}

inline int block_index_bits(int width, int height) { return ceil_log2(block_count_for(width, height)); }

inline int ones_index_bits(std::uint64_t coeff_count) { return ceil_log2(std::max<std::uint64_t>(coeff_count, 2)); }

/// Body bits before byte padding.
inline std::uint64_t body_bits(int width, int height, std::uint64_t coeff_count, std::uint64_t ones_count) {
    const auto rec = static_cast<std::uint64_t>(block_index_bits(width, height) + kYBits + kXHighBits + kSignBits +
                                                kMagnitudeBits);
    return coeff_count * rec + ones_count * static_cast<std::uint64_t>(ones_index_bits(coeff_count));
}

/// Packs coefficients with their split X positions and ones list.
inline PayloadContents make_contents(std::span<const SparseCoeff> coeffs, std::span<const std::uint8_t> x_high,
                                     const OnesList& ones, int width, int height, int Q) {
    if (x_high.size() != coeffs.size() || ones.total != coeffs.size())
        throw InvalidArgument("payload: inconsistent lengths");
    PayloadContents p;
    p.width = width;
    p.height = height;
    p.Q = Q;
    p.ones = ones;
    p.records.reserve(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        p.records.push_back(CoeffRecord{coeffs[i].block_index, coeffs[i].y, x_high[i], coeffs[i].sign < 0,
                                        coeffs[i].magnitude});
    return p;
}

/// Rebuilds full coefficients: regenerates the LSB plane and joins it to x_high.
inline std::vector<SparseCoeff> restore_coeffs(const PayloadContents& p) {
    std::vector<std::uint8_t> x_high;
    x_high.reserve(p.records.size());
    for (const auto& r : p.records) x_high.push_back(r.x_high);
    const auto xs = join(x_high, regenerate(p.ones));
    std::vector<SparseCoeff> out;
    out.reserve(p.records.size());
    for (std::size_t i = 0; i < p.records.size(); ++i) {
        const auto& r = p.records[i];
        out.push_back(SparseCoeff{r.block_index, xs[i], r.y, static_cast<std::int8_t>(r.negative ? -1 : 1),
                                  r.magnitude});
    }
    return out;
}

inline std::vector<std::uint8_t> serialize(const PayloadContents& p) {
    if (p.width < 1 || p.height < 1 || p.width > 0xFFFF || p.height > 0xFFFF)
        throw InvalidArgument("payload: dimensions must be in [1, 65535]");
    if (p.Q < 1 || p.Q > 0xFFFF) throw InvalidArgument("payload: Q must be in [1, 65535]");
    if (p.records.size() > std::numeric_limits<std::uint32_t>::max() ||
        p.ones.indices.size() > std::numeric_limits<std::uint32_t>::max())
        throw InvalidArgument("payload: count overflow");
    if (p.ones.total != p.records.size()) throw InvalidArgument("payload: ones list total != coefficient count");

    const std::uint64_t nblocks = block_count_for(p.width, p.height);
    const int block_bits = block_index_bits(p.width, p.height);
    const int one_bits = ones_index_bits(p.records.size());

    BitWriter w;
    w.put_bytes(kPayloadMagic);
    w.put(kPayloadVersion, 8);
    w.put(kBlockSide, 8);
    w.put_be(static_cast<std::uint64_t>(p.width), 2);
    w.put_be(static_cast<std::uint64_t>(p.height), 2);
    w.put_be(static_cast<std::uint64_t>(p.Q), 2);
    w.put_be(p.records.size(), 4);
    w.put_be(p.ones.indices.size(), 4);
    for (const auto& r : p.records) {
        if (r.block_index >= nblocks || r.y >= kBlockSide || r.x_high >= kBlockSide / 2 || r.magnitude == 0)
            throw InvalidArgument("payload: record field out of range");
        w.put(r.block_index, block_bits);
        w.put(r.y, kYBits);
        w.put(r.x_high, kXHighBits);
        w.put(r.negative ? 1U : 0U, kSignBits);
        w.put(r.magnitude, kMagnitudeBits);
    }
    for (std::size_t k = 0; k < p.ones.indices.size(); ++k) {
        const auto i = p.ones.indices[k];
        if (i >= p.records.size() || (k > 0 && i <= p.ones.indices[k - 1]))
            throw InvalidArgument("payload: ones indices must be strictly increasing and < coefficient count");
        w.put(i, one_bits);
    }
    return std::move(w).finish();
}

inline PayloadContents deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || !std::equal(kPayloadMagic.begin(), kPayloadMagic.end(), bytes.begin()))
        throw FormatError("payload: bad magic");
    if (bytes.size() < kHeaderBytes) throw FormatError("payload: truncated header");
    BitReader r(bytes);
    r.get(32);
    if (const auto version = r.get(8); version != kPayloadVersion)
        throw FormatError("payload: version mismatch (got " + std::to_string(version) + ")");
    if (r.get(8) != kBlockSide) throw FormatError("payload: unsupported block size");

    PayloadContents p;
    p.width = static_cast<int>(r.get(16));
    p.height = static_cast<int>(r.get(16));
    p.Q = static_cast<int>(r.get(16));
    const std::uint64_t coeff_count = r.get(32);
    const std::uint64_t ones_count = r.get(32);
    if (p.width < 1 || p.height < 1) throw FormatError("payload: zero dimension");
    if (p.Q < 1) throw FormatError("payload: zero quantization factor");
    if (ones_count > coeff_count) throw FormatError("payload: more ones than coefficients");

    const std::uint64_t need = body_bits(p.width, p.height, coeff_count, ones_count);
    if (r.remaining() < need) throw FormatError("payload: truncated stream");
    if ((r.remaining() - need) >= 8) throw FormatError("payload: trailing bytes after stream");

    const std::uint64_t nblocks = block_count_for(p.width, p.height);
    const int block_bits = block_index_bits(p.width, p.height);
    p.records.reserve(coeff_count);
    for (std::uint64_t i = 0; i < coeff_count; ++i) {
        CoeffRecord rec;
        rec.block_index = static_cast<std::uint32_t>(r.get(block_bits));
        rec.y = static_cast<std::uint8_t>(r.get(kYBits));
        rec.x_high = static_cast<std::uint8_t>(r.get(kXHighBits));
        rec.negative = r.get(kSignBits) != 0;
        rec.magnitude = static_cast<std::uint8_t>(r.get(kMagnitudeBits));
        if (rec.block_index >= nblocks) throw FormatError("payload: block index out of range");
        if (rec.y >= kBlockSide || rec.x_high >= kBlockSide / 2) throw FormatError("payload: position out of range");
        if (rec.magnitude == 0) throw FormatError("payload: zero magnitude record");
        p.records.push_back(rec);
    }
    p.ones.total = coeff_count;
    const int one_bits = ones_index_bits(coeff_count);
    for (std::uint64_t k = 0; k < ones_count; ++k) {
        const auto i = static_cast<std::uint32_t>(r.get(one_bits));
        if (i >= coeff_count) throw FormatError("payload: ones index out of range");
        if (k > 0 && i <= p.ones.indices.back()) throw FormatError("payload: ones indices not increasing");
        p.ones.indices.push_back(i);
    }
    if (r.remaining() > 0 && r.get(static_cast<int>(r.remaining())) != 0)
        throw FormatError("payload: nonzero padding bits");

    const auto coeffs = restore_coeffs(p);
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        if (coeffs[i - 1].order_key() >= coeffs[i].order_key())
            throw FormatError("payload: coefficient records out of canonical order");
    return p;
}

inline double bpp(std::size_t payload_bytes, int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("bpp: nonpositive dimensions");
    return 8.0 * static_cast<double>(payload_bytes) /
           (static_cast<double>(width) * static_cast<double>(height));
}

} // namespace palqa
