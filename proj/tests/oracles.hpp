#pragma once

// Independent reference computations for the unit and acceptance suites.
// Nothing here calls into the code paths these oracles check.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Direct O(64^2) double-sum orthonormal DCT-II, F[u][v] row-major.
inline std::array<double, 64> dct_direct(const std::array<double, 64>& f) {
    std::array<double, 64> out{};
    const double pi = std::numbers::pi;
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            const double cu = u == 0 ? std::sqrt(0.125) : 0.5;
            const double cv = v == 0 ? std::sqrt(0.125) : 0.5;
            double s = 0.0;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    s += f[y * 8 + x] * std::cos((2 * y + 1) * u * pi / 16.0) * std::cos((2 * x + 1) * v * pi / 16.0);
            out[u * 8 + v] = cu * cv * s;
        }
    return out;
}

/// FRQI 2x2 amplitude for basis |color, X, Y> (color on qubit 0).
inline double frqi_amplitude(const std::array<double, 4>& theta, int color, int x, int y) {
    const double t = theta[static_cast<std::size_t>(2 * y + x)];
    return 0.5 * (color == 0 ? std::cos(t) : std::sin(t));
}

inline int popcount(std::uint32_t v) {
    int n = 0;
    for (; v; v >>= 1) n += static_cast<int>(v & 1U);
    return n;
}

/// Seeded generator shared by the suites; raw mt19937 output only.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : gen_(seed) {}
    std::uint32_t next() { return gen_(); }
    std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(static_cast<std::uint64_t>(gen_()) * n >> 32); }
    int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint32_t>(hi - lo + 1))); }
    double unit() { return static_cast<double>(gen_()) / 4294967296.0; }

private:
    std::mt19937 gen_;
};

} // namespace oracle
