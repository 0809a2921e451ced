#pragma once

// X-position LSB swap.
//
// The encoder strips bit 0 of every nonzero coefficient's X position (the
// swap/trash qubit), keeps the three high bits, and transmits only the
// indices where the stripped bit was 1. The decoder rebuilds the full plane
// from that list: an empty list yields the all-zero plane of the same length,
// otherwise ones are placed at the listed indices. Both cases go through the
// same routine. The plane is ordered like the coefficient stream
// (block raster, then y, then x).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "palqa/error.hpp"
#include "palqa/transform.hpp"

namespace palqa {

struct LsbPlane {
    std::vector<std::uint8_t> bits; // each 0 or 1
    friend bool operator==(const LsbPlane&, const LsbPlane&) = default;
};

struct OnesList {
    std::size_t total = 0;
    std::vector<std::uint32_t> indices; // strictly increasing, < total
    friend bool operator==(const OnesList&, const OnesList&) = default;
};

struct SplitPositions {
    std::vector<std::uint8_t> x_high; // x >> 1
    LsbPlane plane;                   // x & 1
};

inline SplitPositions split_lsb(std::span<const std::uint8_t> xs) {
    SplitPositions out;
    out.x_high.reserve(xs.size());
    out.plane.bits.reserve(xs.size());
    for (const auto x : xs) {
        out.x_high.push_back(static_cast<std::uint8_t>(x >> 1));
        out.plane.bits.push_back(static_cast<std::uint8_t>(x & 1U));
    }
    return out;
}

inline SplitPositions split_lsb(std::span<const SparseCoeff> coeffs) {
    std::vector<std::uint8_t> xs;
    xs.reserve(coeffs.size());
    for (const auto& c : coeffs) xs.push_back(c.x);
    return split_lsb(std::span<const std::uint8_t>(xs));
}

inline OnesList encode_ones(const LsbPlane& plane) {
    OnesList out;
    out.total = plane.bits.size();
    for (std::size_t i = 0; i < plane.bits.size(); ++i)
        if (plane.bits[i] != 0) out.indices.push_back(static_cast<std::uint32_t>(i));
    return out;
}

inline LsbPlane regenerate(const OnesList& ones) {
    LsbPlane plane;
    plane.bits.assign(ones.total, 0);
    std::size_t prev = 0;
    for (std::size_t k = 0; k < ones.indices.size(); ++k) {
        const std::size_t i = ones.indices[k];
        if (i >= ones.total)
            throw InvalidArgument("regenerate: index " + std::to_string(i) + " >= total " +
                                  std::to_string(ones.total));
        if (k > 0 && i <= prev) throw InvalidArgument("regenerate: indices not strictly increasing");
        plane.bits[i] = 1;
        prev = i;
    }
    return plane;
}

inline std::vector<std::uint8_t> join(std::span<const std::uint8_t> x_high, const LsbPlane& plane) {
    if (x_high.size() != plane.bits.size())
        throw InvalidArgument("join: x_high and plane lengths differ");
    std::vector<std::uint8_t> xs;
    xs.reserve(x_high.size());
    for (std::size_t i = 0; i < x_high.size(); ++i) {
        if (x_high[i] >= 4) throw InvalidArgument("join: x_high value out of range");
        if (plane.bits[i] > 1) throw InvalidArgument("join: plane bit not 0/1");
        xs.push_back(static_cast<std::uint8_t>((x_high[i] << 1) | plane.bits[i]));
    }
    return xs;
}

} // namespace palqa
