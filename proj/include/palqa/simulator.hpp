#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "palqa/circuit.hpp"
#include "palqa/error.hpp"
#include "palqa/transform.hpp"

namespace palqa {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 24;
inline constexpr double kResetTolerance = 1e-10;
inline constexpr double kDecodeThreshold = 1e-9;

/// Qubit cap, overridable through PALQA_MAX_QUBITS.
inline int max_qubits_from_env() {
    if (const char* env = std::getenv("PALQA_MAX_QUBITS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 40) return static_cast<int>(v);
    }
    return kDefaultMaxQubits;
}

/// Dense statevector; basis index bit k is qubit k.
struct StateVector {
    int n_qubits = 0;
    std::vector<Amplitude> amplitudes;

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

namespace detail {

// Calls f(i0) for every basis index whose fixed bits (controls + target) are
// zero, with `set_mask` OR-ed in. i0 has the target bit clear.
template <typename F>
void for_each_pair(int n_qubits, const Gate& g, F&& f) {
    std::vector<int> fixed;
    fixed.reserve(g.controls.size() + 1);
    std::uint64_t set_mask = 0;
    for (const auto& c : g.controls) {
        fixed.push_back(c.qubit);
        if (c.positive) set_mask |= std::uint64_t{1} << c.qubit;
    }
    fixed.push_back(g.target);
    std::sort(fixed.begin(), fixed.end());
    const int free_bits = n_qubits - static_cast<int>(fixed.size());
    const std::uint64_t count = std::uint64_t{1} << free_bits;
    for (std::uint64_t k = 0; k < count; ++k) {
        std::uint64_t i = k;
        for (int p : fixed) {
            const std::uint64_t low = i & ((std::uint64_t{1} << p) - 1);
            i = ((i >> p) << (p + 1)) | low;
        }
        f(i | set_mask);
    }
}

inline void apply_reset(StateVector& s, int target) {
    const std::uint64_t bit = std::uint64_t{1} << target;
    double p1 = 0.0;
    for (std::uint64_t i = 0; i < s.amplitudes.size(); ++i)
        if (i & bit) p1 += std::norm(s.amplitudes[i]);
    if (p1 <= kResetTolerance) {
        for (std::uint64_t i = 0; i < s.amplitudes.size(); ++i)
            if (i & bit) s.amplitudes[i] = 0.0;
    } else if (p1 >= 1.0 - kResetTolerance) {
        for (std::uint64_t i = 0; i < s.amplitudes.size(); ++i)
            if (i & bit) {
                s.amplitudes[i & ~bit] = s.amplitudes[i];
                s.amplitudes[i] = 0.0;
            }
    } else {
        throw SimulationError("reset on q" + std::to_string(target) +
                              " is nondeterministic (P(1) = " + std::to_string(p1) + ")");
    }
}

} // namespace detail

inline void apply_gate(StateVector& s, const Gate& g) {
    if (g.target < 0 || g.target >= s.n_qubits) throw SimulationError("gate target outside state");
    for (const auto& c : g.controls)
        if (c.qubit < 0 || c.qubit >= s.n_qubits || c.qubit == g.target)
            throw SimulationError("bad control qubit");
    auto& a = s.amplitudes;
    const std::uint64_t t = std::uint64_t{1} << g.target;
    switch (g.kind) {
    case GateKind::X:
        detail::for_each_pair(s.n_qubits, g, [&](std::uint64_t i) { std::swap(a[i], a[i | t]); });
        break;
    case GateKind::H: {
        const double r = 1.0 / std::numbers::sqrt2;
        detail::for_each_pair(s.n_qubits, g, [&](std::uint64_t i) {
            const Amplitude lo = a[i];
            const Amplitude hi = a[i | t];
            a[i] = r * (lo + hi);
            a[i | t] = r * (lo - hi);
        });
        break;
    }
    case GateKind::RY: {
        const double cs = std::cos(g.angle / 2.0);
        const double sn = std::sin(g.angle / 2.0);
        detail::for_each_pair(s.n_qubits, g, [&](std::uint64_t i) {
            const Amplitude lo = a[i];
            const Amplitude hi = a[i | t];
            a[i] = cs * lo - sn * hi;
            a[i | t] = sn * lo + cs * hi;
        });
        break;
    }
    case GateKind::Reset:
        if (!g.controls.empty()) throw SimulationError("controlled reset");
        detail::apply_reset(s, g.target);
        break;
    }
}

/// Evolves |0...0> through the circuit's gates in order.
inline StateVector simulate(const Circuit& c, int max_qubits = kDefaultMaxQubits) {
    if (c.qubits() > max_qubits)
        throw SimulationError("circuit needs " + std::to_string(c.qubits()) +
                              " qubits, cap is " + std::to_string(max_qubits));
    StateVector s;
    s.n_qubits = c.qubits();
    s.amplitudes.assign(std::size_t{1} << s.n_qubits, Amplitude{0.0, 0.0});
    s.amplitudes[0] = 1.0;
    for (const auto& g : c.gates()) apply_gate(s, g);
    return s;
}

// ---------------------------------------------------------------------------
// Decoding

struct DecodedEntry {
    std::uint64_t basis = 0;
    std::uint32_t value = 0;
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint8_t trash = 0; // trash qubit in the swapped layout, else 0
    Amplitude amplitude{};
};

namespace detail {

inline std::uint32_t bit_of(std::uint64_t basis, int q) {
    return static_cast<std::uint32_t>((basis >> q) & 1U);
}

} // namespace detail

/// Every basis state with |amplitude| above the threshold, fields sliced per
/// layout, in basis order.
inline std::vector<DecodedEntry> decode_state(const StateVector& s, const QubitLayout& l,
                                              double threshold = kDecodeThreshold) {
    if (s.n_qubits != l.total) throw InvalidArgument("decode: state/layout qubit mismatch");
    std::vector<DecodedEntry> out;
    for (std::uint64_t i = 0; i < s.amplitudes.size(); ++i) {
        if (std::abs(s.amplitudes[i]) <= threshold) continue;
        DecodedEntry e;
        e.basis = i;
        e.amplitude = s.amplitudes[i];
        for (int b = 0; b < l.value_bits; ++b) e.value |= detail::bit_of(i, l.value_offset + b) << b;
        if (l.x_encoding == XEncoding::lsb_swapped) {
            // superposed bits decode through x_qubit; the held top qubits are
            // read in place so a stray excitation shows up as an out-of-range x
            for (int b = 0; b < l.hadamard_x; ++b) e.x |= detail::bit_of(i, l.x_qubit(b)) << b;
            for (int b = l.hadamard_x + 1; b < l.x_bits; ++b) e.x |= detail::bit_of(i, l.x_offset + b) << b;
            e.trash = static_cast<std::uint8_t>(detail::bit_of(i, *l.trash_qubit()));
        } else {
            for (int b = 0; b < l.x_bits; ++b) e.x |= detail::bit_of(i, l.x_offset + b) << b;
        }
        for (int b = 0; b < l.y_bits; ++b) e.y |= detail::bit_of(i, l.y_offset + b) << b;
        out.push_back(e);
    }
    return out;
}

/// True when every entry's |amplitude| equals `expected` within tol.
inline bool uniform_magnitude(std::span<const DecodedEntry> entries, double expected, double tol = 1e-10) {
    return std::all_of(entries.begin(), entries.end(), [&](const DecodedEntry& e) {
        return std::abs(std::abs(e.amplitude) - expected) <= tol;
    });
}

/// Scatters decoded (value, x, y) into an 8x8 block. `signs` gives the sign
/// of each nonzero entry in (y, x) order, as carried by the payload.
inline QuantBlock reconstruct_block(std::span<const DecodedEntry> entries, std::span<const std::int8_t> signs) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> cells; // (y, x) -> value
    for (const auto& e : entries) {
        if (e.x >= kBlockSide || e.y >= kBlockSide)
            throw InvalidArgument("reconstruct: decoded position outside 8x8 block");
        if (!cells.emplace(std::pair{e.y, e.x}, e.value).second)
            throw InvalidArgument("reconstruct: duplicate position (" + std::to_string(e.y) + "," +
                                  std::to_string(e.x) + ")");
    }
    QuantBlock out;
    std::size_t k = 0;
    for (const auto& [pos, value] : cells) {
        if (value == 0) continue;
        if (k >= signs.size()) throw InvalidArgument("reconstruct: fewer signs than nonzero entries");
        const std::int8_t s = signs[k++];
        if (s != 1 && s != -1) throw InvalidArgument("reconstruct: sign must be +1 or -1");
        out.q[pos.first * kBlockSide + pos.second] = s * static_cast<std::int32_t>(value);
    }
    if (k != signs.size()) throw InvalidArgument("reconstruct: more signs than nonzero entries");
    return out;
}

/// "<basis bits, qubit 0 rightmost> <re> <im>" per line for |amp| > threshold.
inline std::string dump_state(const StateVector& s, double threshold = kDecodeThreshold) {
    std::string out;
    char num[96];
    for (std::uint64_t i = 0; i < s.amplitudes.size(); ++i) {
        const auto& a = s.amplitudes[i];
        if (std::abs(a) <= threshold) continue;
        for (int q = s.n_qubits - 1; q >= 0; --q) out += ((i >> q) & 1U) ? '1' : '0';
        std::snprintf(num, sizeof num, " %.17g %.17g\n", a.real(), a.imag());
        out += num;
    }
    return out;
}

} // namespace palqa
