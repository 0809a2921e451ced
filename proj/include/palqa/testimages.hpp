#pragma once

// Deterministic synthetic test corpus. Raw mt19937 output only, so the images
// are identical on every standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "palqa/image.hpp"

namespace palqa::corpus {

inline std::uint8_t to_pixel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

inline GrayImage gradient(int width = 64, int height = 64) {
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(x, y) = to_pixel(16.0 + 223.0 * (x + y) / std::max(1, width + height - 2));
    return img;
}

/// Checkerboard with cells offset from the block grid, so block interiors contain edges.
inline GrayImage checkerboard(int width = 64, int height = 64, int cell = 6) {
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(x, y) = (((x + 3) / cell + (y + 3) / cell) % 2) ? 200 : 56;
    return img;
}

/// Smooth shading, a few shaded disks, a textured band and mild noise.
inline GrayImage natural(int width = 256, int height = 256, std::uint32_t seed = 2024) {
    std::mt19937 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng()) / 4294967296.0; };
    struct Disk {
        double cx, cy, r, level;
    };
    std::vector<Disk> disks;
    for (int i = 0; i < 6; ++i)
        disks.push_back({unit() * width, unit() * height, (0.08 + 0.15 * unit()) * std::min(width, height),
                         40.0 + 170.0 * unit()});
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = static_cast<double>(x) / width;
            const double v = static_cast<double>(y) / height;
            double p = 70.0 + 110.0 * v + 25.0 * std::sin(2.0 * std::numbers::pi * u * 1.5);
            for (const auto& d : disks) {
                const double dist = std::hypot(x - d.cx, y - d.cy);
                if (dist < d.r) p = d.level + 30.0 * (1.0 - dist / d.r);
            }
            if (v > 0.7) p += 18.0 * std::sin(0.9 * x) * std::cos(0.7 * y);
            p += 8.0 * (unit() - 0.5);
            img.at(x, y) = to_pixel(p);
        }
    }
    return img;
}

/// Uniform noise, the hardest case for the transform stage.
inline GrayImage noise(int width, int height, std::uint32_t seed) {
    std::mt19937 rng(seed);
    GrayImage img(width, height);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng() & 0xFFU);
    return img;
}

struct NamedImage {
    std::string name;
    GrayImage image;
};

/// The bundled corpus used by the RD tests.
inline std::vector<NamedImage> bundled() {
    return {
        {"gradient64", gradient(64, 64)},
        {"checker64", checkerboard(64, 64)},
        {"natural256", natural(256, 256)},
        {"natural100x75", natural(100, 75, 7)},
    };
}

} // namespace palqa::corpus
