#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "palqa/error.hpp"

namespace palqa {

inline constexpr int kBlockSide = 8;
inline constexpr int kBlockArea = kBlockSide * kBlockSide;

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, std::uint8_t fill = 0)
        : GrayImage(width, height,
                    std::vector<std::uint8_t>(checked_area(width, height), fill)) {}

    GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (pixels_.size() != checked_area(width, height))
            throw InvalidArgument("pixel count does not match " + std::to_string(width) +
                                  "x" + std::to_string(height));
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    static std::size_t checked_area(int width, int height) {
        if (width < 1 || height < 1)
            throw InvalidArgument("image dimensions must be positive");
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct BlockOrigin {
    int row = 0; // block-grid row
    int col = 0; // block-grid column
    friend bool operator==(const BlockOrigin&, const BlockOrigin&) = default;
};

struct PixelBlock {
    std::array<std::uint8_t, kBlockArea> samples{}; // row-major
    BlockOrigin origin;
    friend bool operator==(const PixelBlock&, const PixelBlock&) = default;
};

// ---------------------------------------------------------------------------
// PGM (binary P5, maxval 255)

namespace detail {

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then parses a decimal integer.
    long next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) throw FormatError("pgm: truncated header");
        bool negative = false;
        if (bytes_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        if (pos_ >= bytes_.size() || !is_digit(bytes_[pos_]))
            throw FormatError("pgm: expected integer in header");
        long value = 0;
        while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw FormatError("pgm: header integer too large");
            ++pos_;
        }
        return negative ? -value : value;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }

private:
    static bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw FormatError("pgm: bad magic (expected P5)");
    detail::PgmHeaderReader reader(bytes.subspan(2));
    const long width = reader.next_int();
    const long height = reader.next_int();
    const long maxval = reader.next_int();
    if (width < 1 || height < 1) throw FormatError("pgm: nonpositive dimensions");
    if (width > std::numeric_limits<int>::max() || height > std::numeric_limits<int>::max())
        throw FormatError("pgm: dimensions too large");
    if (maxval != 255) throw FormatError("pgm: maxval must be 255");

    // exactly one whitespace byte separates maxval from the raster
    std::size_t offset = 2 + reader.pos();
    if (offset >= bytes.size()) throw FormatError("pgm: truncated payload");
    ++offset;

    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - offset < count) throw FormatError("pgm: truncated payload");
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(offset + count));
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

inline std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

// ---------------------------------------------------------------------------
// Block geometry

inline int blocks_along(int extent, int side = kBlockSide) { return (extent + side - 1) / side; }

/// Rounds both dimensions up to a multiple of `side`, replicating the last
/// column/row into the new samples.
inline GrayImage pad_to_blocks(const GrayImage& img, int side = kBlockSide) {
    if (side < 1) throw InvalidArgument("block side must be >= 1");
    const int w = blocks_along(img.width(), side) * side;
    const int h = blocks_along(img.height(), side) * side;
    if (w == img.width() && h == img.height()) return img;
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const int sy = std::min(y, img.height() - 1);
        for (int x = 0; x < w; ++x) out.at(x, y) = img.at(std::min(x, img.width() - 1), sy);
    }
    return out;
}

inline GrayImage crop(const GrayImage& img, int width, int height) {
    if (width < 1 || height < 1 || width > img.width() || height > img.height())
        throw InvalidArgument("crop region outside image");
    if (width == img.width() && height == img.height()) return img;
    GrayImage out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) out.at(x, y) = img.at(x, y);
    return out;
}

/// Splits a block-aligned image into 8x8 blocks in raster order over the block grid.
inline std::vector<PixelBlock> partition(const GrayImage& img) {
    if (img.width() % kBlockSide != 0 || img.height() % kBlockSide != 0)
        throw InvalidArgument("partition: dimensions must be multiples of 8");
    const int cols = img.width() / kBlockSide;
    const int rows = img.height() / kBlockSide;
    std::vector<PixelBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (int br = 0; br < rows; ++br) {
        for (int bc = 0; bc < cols; ++bc) {
            PixelBlock b;
            b.origin = {br, bc};
            for (int y = 0; y < kBlockSide; ++y)
                for (int x = 0; x < kBlockSide; ++x)
                    b.samples[static_cast<std::size_t>(y * kBlockSide + x)] =
                        img.at(bc * kBlockSide + x, br * kBlockSide + y);
            blocks.push_back(b);
        }
    }
    return blocks;
}

/// Inverse of partition. Blocks may arrive in any order but must cover the
/// grid exactly once.
inline GrayImage merge(std::span<const PixelBlock> blocks, int width, int height) {
    if (width < 1 || height < 1 || width % kBlockSide != 0 || height % kBlockSide != 0)
        throw InvalidArgument("merge: dimensions must be positive multiples of 8");
    const int cols = width / kBlockSide;
    const int rows = height / kBlockSide;
    if (blocks.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw InvalidArgument("merge: block count does not match dimensions");
    std::vector<bool> seen(blocks.size(), false);
    GrayImage out(width, height);
    for (const auto& b : blocks) {
        if (b.origin.row < 0 || b.origin.row >= rows || b.origin.col < 0 || b.origin.col >= cols)
            throw InvalidArgument("merge: block origin outside grid");
        const auto slot = static_cast<std::size_t>(b.origin.row * cols + b.origin.col);
        if (seen[slot]) throw InvalidArgument("merge: duplicate block origin");
        seen[slot] = true;
        for (int y = 0; y < kBlockSide; ++y)
            for (int x = 0; x < kBlockSide; ++x)
                out.at(b.origin.col * kBlockSide + x, b.origin.row * kBlockSide + y) =
                    b.samples[static_cast<std::size_t>(y * kBlockSide + x)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distortion

inline double mse(const GrayImage& a, const GrayImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw InvalidArgument("psnr: dimension mismatch");
    double sum = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(pa.size());
}

/// 10*log10(255^2 / MSE); +infinity when the images are identical.
inline double psnr(const GrayImage& a, const GrayImage& b) {
    const double e = mse(a, b);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / e);
}

} // namespace palqa
