#pragma once

// Gate-level circuit IR and the state-preparation builders (FRQI, NEQR,
// NZ-NEQR, ZSCNEQR, PALQA), with a line-oriented text format.
//
// Block circuits use a 17-qubit layout:
//   q0..q7   coefficient magnitude (q0 = LSB)
//   q8       auxiliary connection qubit
//   q9..q12  X position (q9 = X LSB, the swap/trash qubit)
//   q13..q16 Y position
// Only three qubits per axis are put in superposition, since within-block
// positions span 0..7; the fourth qubit of each axis stays |0>.
//
// PALQA moves the X LSB off q9: the superposed X qubits are q10, q11 (the
// two high position bits) and q12 (the swapped-in LSB), so every value gate
// is controlled by the three high X qubits only. q9 becomes the trash qubit.
// Odd-X coefficients reconnect to it with one gate each, which writes the
// regenerated LSB back into q9 on that coefficient's branch.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "palqa/error.hpp"
#include "palqa/lsbswap.hpp"
#include "palqa/transform.hpp"

namespace palqa {

inline int ceil_log2(std::uint64_t n) {
    return n <= 1 ? 0 : static_cast<int>(std::bit_width(n - 1));
}

enum class XEncoding {
    direct,      // X bit j on qubit x_offset + j
    lsb_swapped, // X bit 0 on qubit x_offset + hadamard_x, bits >= 1 unchanged, x_offset is trash
};

struct QubitLayout {
    int value_offset = 0;
    int value_bits = 8;
    std::optional<int> aux;
    int x_offset = 0;
    int x_bits = 0;
    int y_offset = 0;
    int y_bits = 0;
    int hadamard_x = 0; // superposed X qubits
    int hadamard_y = 0;
    XEncoding x_encoding = XEncoding::direct;
    int total = 0;

    /// Qubit holding bit `bit` of the X position.
    int x_qubit(int bit) const {
        if (x_encoding == XEncoding::lsb_swapped && bit == 0) return x_offset + hadamard_x;
        return x_offset + bit;
    }
    int y_qubit(int bit) const { return y_offset + bit; }

    /// X qubit that is never superposed in the swapped layout.
    std::optional<int> trash_qubit() const {
        if (x_encoding == XEncoding::lsb_swapped) return x_offset;
        return std::nullopt;
    }

    /// Qubits put in superposition by the U = I ⊗ H^n stage, ascending.
    std::vector<int> superposed_qubits() const {
        std::vector<int> qs;
        for (int b = 0; b < hadamard_x; ++b) qs.push_back(x_qubit(b));
        for (int b = 0; b < hadamard_y; ++b) qs.push_back(y_qubit(b));
        std::sort(qs.begin(), qs.end());
        return qs;
    }

    bool is_position_qubit(int q) const {
        return (q >= x_offset && q < x_offset + x_bits) || (q >= y_offset && q < y_offset + y_bits);
    }

    void validate() const {
        if (total < 1) throw InvalidArgument("layout: empty");
        if (hadamard_x > x_bits || hadamard_y > y_bits)
            throw InvalidArgument("layout: more superposed qubits than register width");
        if (x_encoding == XEncoding::lsb_swapped && hadamard_x >= x_bits)
            throw InvalidArgument("layout: swapped X encoding needs a spare X qubit");
        std::vector<int> used(static_cast<std::size_t>(total), 0);
        auto mark = [&](int first, int count) {
            for (int q = first; q < first + count; ++q) {
                if (q < 0 || q >= total) throw InvalidArgument("layout: qubit outside total");
                if (used[static_cast<std::size_t>(q)]++) throw InvalidArgument("layout: overlapping registers");
            }
        };
        mark(value_offset, value_bits);
        if (aux) mark(*aux, 1);
        mark(x_offset, x_bits);
        mark(y_offset, y_bits);
    }

    friend bool operator==(const QubitLayout&, const QubitLayout&) = default;
};

namespace layouts {

inline constexpr int kPositionBits = 4; // log2(8) + 1 per axis

/// 17-qubit block layout used by ZSCNEQR.
inline QubitLayout block() {
    QubitLayout l;
    l.value_offset = 0;
    l.value_bits = 8;
    l.aux = 8;
    l.x_offset = 9;
    l.x_bits = kPositionBits;
    l.y_offset = 13;
    l.y_bits = kPositionBits;
    l.hadamard_x = 3;
    l.hadamard_y = 3;
    l.total = 17;
    return l;
}

/// Same qubits as block(), with the X LSB swapped onto q12 and q9 as trash.
inline QubitLayout palqa_block() {
    QubitLayout l = block();
    l.x_encoding = XEncoding::lsb_swapped;
    return l;
}

/// NEQR over a 2^k x 2^k image: 8 value qubits, then k X and k Y qubits.
inline QubitLayout neqr(int k) {
    QubitLayout l;
    l.value_bits = 8;
    l.x_offset = 8;
    l.x_bits = k;
    l.y_offset = 8 + k;
    l.y_bits = k;
    l.hadamard_x = k;
    l.hadamard_y = k;
    l.total = 8 + 2 * k;
    return l;
}

/// FRQI 2x2: color q0, X q1, Y q2.
inline QubitLayout frqi() {
    QubitLayout l;
    l.value_bits = 1;
    l.x_offset = 1;
    l.x_bits = 1;
    l.y_offset = 2;
    l.y_bits = 1;
    l.hadamard_x = 1;
    l.hadamard_y = 1;
    l.total = 3;
    return l;
}

/// NZ-NEQR over a full image: ceil(log2 W)+1 X and ceil(log2 H)+1 Y qubits.
inline QubitLayout nzneqr(int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("nzneqr layout: nonpositive dimensions");
    QubitLayout l;
    l.value_bits = 8;
    l.aux = 8;
    l.x_offset = 9;
    l.hadamard_x = ceil_log2(static_cast<std::uint64_t>(width));
    l.x_bits = l.hadamard_x + 1;
    l.y_offset = l.x_offset + l.x_bits;
    l.hadamard_y = ceil_log2(static_cast<std::uint64_t>(height));
    l.y_bits = l.hadamard_y + 1;
    l.total = l.y_offset + l.y_bits;
    return l;
}

/// Register-free layout of n qubits, used for parsed circuits.
inline QubitLayout flat(int n) {
    QubitLayout l;
    l.value_bits = n;
    l.total = n;
    return l;
}

} // namespace layouts

// ---------------------------------------------------------------------------
// Gates

enum class GateKind { H, X, RY, Reset };

struct Control {
    int qubit = 0;
    bool positive = true; // false: fires on |0>
    friend bool operator==(const Control&, const Control&) = default;
};

struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    std::vector<Control> controls;
    double angle = 0.0; // RY only, radians

    friend bool operator==(const Gate&, const Gate&) = default;
};

inline Gate h_gate(int q) { return Gate{GateKind::H, q, {}, 0.0}; }
inline Gate x_gate(int q, std::vector<Control> controls = {}) {
    return Gate{GateKind::X, q, std::move(controls), 0.0};
}
inline Gate ry_gate(int q, double angle, std::vector<Control> controls = {}) {
    return Gate{GateKind::RY, q, std::move(controls), angle};
}
inline Gate reset_gate(int q) { return Gate{GateKind::Reset, q, {}, 0.0}; }

class Circuit {
public:
    Circuit() = default;
    Circuit(QubitLayout layout, std::string label) : layout_(layout), label_(std::move(label)) {
        layout_.validate();
    }

    void add(Gate g) {
        check(g);
        gates_.push_back(std::move(g));
    }

    /// Appends without validation. Only for negative-control tests.
    void add_unchecked(Gate g) { gates_.push_back(std::move(g)); }

    const QubitLayout& layout() const noexcept { return layout_; }
    std::span<const Gate> gates() const noexcept { return gates_; }
    const std::string& label() const noexcept { return label_; }
    int qubits() const noexcept { return layout_.total; }

private:
    void check(const Gate& g) const {
        auto in_range = [&](int q) { return q >= 0 && q < layout_.total; };
        if (!in_range(g.target)) throw InvalidArgument("gate target outside layout");
        if (g.kind == GateKind::Reset && !g.controls.empty())
            throw InvalidArgument("reset cannot be controlled");
        if (g.kind == GateKind::RY && !std::isfinite(g.angle))
            throw InvalidArgument("rotation angle must be finite");
        std::set<int> seen;
        for (const auto& c : g.controls) {
            if (!in_range(c.qubit)) throw InvalidArgument("control outside layout");
            if (c.qubit == g.target) throw InvalidArgument("control equals target");
            if (!seen.insert(c.qubit).second) throw InvalidArgument("duplicate control qubit");
        }
    }

    QubitLayout layout_;
    std::string label_;
    std::vector<Gate> gates_;
};

struct GateCounts {
    std::size_t h = 0;
    std::size_t x = 0;   // uncontrolled X
    std::size_t mcx = 0; // X with >= 1 control
    std::size_t ry = 0;  // RY, controlled or not
    std::size_t reset = 0;
    std::size_t total = 0;

    GateCounts& operator+=(const GateCounts& o) {
        h += o.h;
        x += o.x;
        mcx += o.mcx;
        ry += o.ry;
        reset += o.reset;
        total += o.total;
        return *this;
    }
};

inline GateCounts count_gates(const Circuit& c) {
    GateCounts n;
    for (const auto& g : c.gates()) {
        switch (g.kind) {
        case GateKind::H: ++n.h; break;
        case GateKind::X: ++(g.controls.empty() ? n.x : n.mcx); break;
        case GateKind::RY: ++n.ry; break;
        case GateKind::Reset: ++n.reset; break;
        }
        ++n.total;
    }
    return n;
}

/// Number of gates whose target or controls include qubit q.
inline std::size_t gates_touching(const Circuit& c, int q) {
    return static_cast<std::size_t>(std::count_if(c.gates().begin(), c.gates().end(), [q](const Gate& g) {
        return g.target == q || std::any_of(g.controls.begin(), g.controls.end(),
                                            [q](const Control& k) { return k.qubit == q; });
    }));
}

/// Position-qubit connections per coefficient, summed: for every stretch of
/// gates between consecutive resets of the aux qubit, the number of distinct
/// position qubits referenced. This is the structural counterpart of B_state.
inline std::size_t position_connections(const Circuit& c) {
    const auto& l = c.layout();
    if (!l.aux) return 0;
    std::size_t total = 0;
    std::set<int> group;
    auto note = [&](int q) {
        if (l.is_position_qubit(q)) group.insert(q);
    };
    for (const auto& g : c.gates()) {
        if (g.kind == GateKind::Reset && g.target == *l.aux) {
            total += group.size();
            group.clear();
            continue;
        }
        if (g.kind == GateKind::H) continue;
        note(g.target);
        for (const auto& k : g.controls) note(k.qubit);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {

inline void append_hadamards(Circuit& c) {
    for (int q : c.layout().superposed_qubits()) c.add(h_gate(q));
}

// Controls selecting X position `x` across qubits x_offset .. x_offset+x_bits-1,
// skipping the trash qubit. Held qubits get negative controls.
inline void append_x_controls(const QubitLayout& l, std::uint32_t x, std::vector<Control>& out) {
    const auto trash = l.trash_qubit();
    for (int q = l.x_offset; q < l.x_offset + l.x_bits; ++q) {
        if (trash && q == *trash) continue;
        int bit = -1;
        for (int b = 0; b < l.hadamard_x; ++b)
            if (l.x_qubit(b) == q) bit = b;
        const bool one = bit >= 0 && ((x >> bit) & 1U) != 0;
        out.push_back(Control{q, one});
    }
}

inline void append_y_controls(const QubitLayout& l, std::uint32_t y, std::vector<Control>& out) {
    for (int b = 0; b < l.y_bits; ++b)
        out.push_back(Control{l.y_qubit(b), b < l.hadamard_y && ((y >> b) & 1U) != 0});
}

inline std::vector<Control> position_controls(const QubitLayout& l, std::uint32_t x, std::uint32_t y) {
    std::vector<Control> ctrl;
    append_x_controls(l, x, ctrl);
    append_y_controls(l, y, ctrl);
    return ctrl;
}

inline void check_block_coeffs(std::span<const SparseCoeff> coeffs) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto& c = coeffs[i];
        if (c.x >= kBlockSide || c.y >= kBlockSide)
            throw InvalidArgument("block circuit: coefficient position out of range");
        if (c.magnitude == 0) throw InvalidArgument("block circuit: zero magnitude");
        if (c.block_index != coeffs[0].block_index)
            throw InvalidArgument("block circuit: coefficients from more than one block");
        if (i > 0 && coeffs[i - 1].order_key() >= c.order_key())
            throw InvalidArgument("block circuit: coefficients not in canonical order");
    }
}

// aux connect -> value gates (position controls bound in) -> [reconnect] -> reset
inline void append_block_coefficient(Circuit& c, std::uint32_t x, std::uint32_t y,
                                     std::uint8_t magnitude, bool reconnect_trash) {
    const auto& l = c.layout();
    const int aux = *l.aux;
    c.add(x_gate(aux));
    std::vector<Control> ctrl{Control{aux, true}};
    const auto pos = position_controls(l, x, y);
    ctrl.insert(ctrl.end(), pos.begin(), pos.end());
    for (int b = 0; b < l.value_bits; ++b)
        if ((magnitude >> b) & 1U) c.add(x_gate(l.value_offset + b, ctrl));
    if (reconnect_trash) c.add(x_gate(*l.trash_qubit(), ctrl));
    c.add(reset_gate(aux));
}

} // namespace detail

/// FRQI for a 2x2 image. angles[p] in [0, pi/2], p = 2*Y + X.
inline Circuit build_frqi(std::span<const double> angles) {
    if (angles.size() != 4) throw InvalidArgument("frqi: exactly 4 angles required");
    for (double a : angles)
        if (!(a >= 0.0 && a <= std::numbers::pi / 2))
            throw InvalidArgument("frqi: angle outside [0, pi/2]");
    Circuit c(layouts::frqi(), "frqi");
    detail::append_hadamards(c);
    const auto& l = c.layout();
    for (std::uint32_t p = 0; p < 4; ++p) {
        std::vector<Control> ctrl;
        detail::append_x_controls(l, p & 1U, ctrl);
        detail::append_y_controls(l, p >> 1, ctrl);
        c.add(ry_gate(l.value_offset, 2.0 * angles[p], std::move(ctrl)));
    }
    return c;
}

/// NEQR for a square 2^k x 2^k image (k <= 3), pixels row-major.
inline Circuit build_neqr(std::span<const std::uint8_t> pixels) {
    int k = -1;
    for (int cand = 0; cand <= 3; ++cand)
        if (pixels.size() == (std::size_t{1} << (2 * cand))) k = cand;
    if (k < 0) throw InvalidArgument("neqr: image must be square 2^k x 2^k with k <= 3");
    const std::uint32_t side = 1U << k;
    Circuit c(layouts::neqr(k), "neqr");
    detail::append_hadamards(c);
    const auto& l = c.layout();
    for (std::uint32_t y = 0; y < side; ++y)
        for (std::uint32_t x = 0; x < side; ++x) {
            const std::uint8_t v = pixels[y * side + x];
            const auto ctrl = detail::position_controls(l, x, y);
            for (int b = 0; b < 8; ++b)
                if ((v >> b) & 1U) c.add(x_gate(l.value_offset + b, ctrl));
        }
    return c;
}

/// NZ-NEQR over the full (block-aligned) image; positions are global.
/// Per coefficient: aux marks the occupied position, then one gate per set bit.
inline Circuit build_nzneqr(std::span<const SparseCoeff> coeffs, int width, int height) {
    if (width % kBlockSide != 0 || height % kBlockSide != 0)
        throw InvalidArgument("nzneqr: dimensions must be block aligned");
    Circuit c(layouts::nzneqr(width, height), "nzneqr");
    detail::append_hadamards(c);
    const auto& l = c.layout();
    const std::uint32_t blocks_w = static_cast<std::uint32_t>(width / kBlockSide);
    const std::uint32_t nblocks = blocks_w * static_cast<std::uint32_t>(height / kBlockSide);
    for (const auto& k : coeffs) {
        if (k.block_index >= nblocks || k.x >= kBlockSide || k.y >= kBlockSide)
            throw InvalidArgument("nzneqr: coefficient position out of range");
        const std::uint32_t gx = (k.block_index % blocks_w) * kBlockSide + k.x;
        const std::uint32_t gy = (k.block_index / blocks_w) * kBlockSide + k.y;
        const auto ctrl = detail::position_controls(l, gx, gy);
        c.add(x_gate(*l.aux, ctrl));
        for (int b = 0; b < 8; ++b)
            if ((k.magnitude >> b) & 1U) c.add(x_gate(l.value_offset + b, ctrl));
    }
    return c;
}

/// ZSCNEQR for one block's coefficients (canonical order, single block index).
inline Circuit build_zscneqr(std::span<const SparseCoeff> coeffs) {
    detail::check_block_coeffs(coeffs);
    Circuit c(layouts::block(), "zscneqr");
    detail::append_hadamards(c);
    for (const auto& k : coeffs) detail::append_block_coefficient(c, k.x, k.y, k.magnitude, false);
    return c;
}

/// PALQA for one block, built from the transmitted form: magnitudes and Y from
/// `coeffs`, X from x_high plus the plane regenerated from `ones`. The x field
/// of `coeffs` is not read.
inline Circuit build_palqa(std::span<const SparseCoeff> coeffs, std::span<const std::uint8_t> x_high,
                           const OnesList& ones) {
    if (x_high.size() != coeffs.size() || ones.total != coeffs.size())
        throw InvalidArgument("palqa: inconsistent lengths");
    const LsbPlane plane = regenerate(ones);
    const auto xs = join(x_high, plane);
    std::vector<SparseCoeff> placed(coeffs.begin(), coeffs.end());
    for (std::size_t i = 0; i < placed.size(); ++i) placed[i].x = xs[i];
    detail::check_block_coeffs(placed);

    Circuit c(layouts::palqa_block(), "palqa");
    detail::append_hadamards(c);
    for (std::size_t i = 0; i < placed.size(); ++i)
        detail::append_block_coefficient(c, placed[i].x, placed[i].y, placed[i].magnitude,
                                         plane.bits[i] != 0);
    return c;
}

inline Circuit build_palqa(std::span<const SparseCoeff> coeffs) {
    const auto split = split_lsb(coeffs);
    return build_palqa(coeffs, split.x_high, encode_ones(split.plane));
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::string format_angle(double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", a);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline int parse_qubit(std::string_view tok, int line_no) {
    if (tok.size() < 2 || tok[0] != 'q') throw FormatError("circuit line " + std::to_string(line_no) + ": bad qubit '" + std::string(tok) + "'");
    int v = 0;
    for (char ch : tok.substr(1)) {
        if (ch < '0' || ch > '9') throw FormatError("circuit line " + std::to_string(line_no) + ": bad qubit '" + std::string(tok) + "'");
        v = v * 10 + (ch - '0');
        if (v > 1'000'000) throw FormatError("circuit line " + std::to_string(line_no) + ": qubit index too large");
    }
    return v;
}

} // namespace detail

inline std::string export_text(const Circuit& c) {
    std::string out = "qubits " + std::to_string(c.qubits()) + "\n";
    for (const auto& g : c.gates()) {
        std::string name;
        switch (g.kind) {
        case GateKind::H: name = "h"; break;
        case GateKind::X: name = g.controls.empty() ? "x" : "mcx"; break;
        case GateKind::RY: name = "ry(" + detail::format_angle(g.angle) + ")"; break;
        case GateKind::Reset: name = "reset"; break;
        }
        if (!g.controls.empty()) {
            if (g.kind != GateKind::X) name = "c" + name;
            name += " [";
            for (std::size_t i = 0; i < g.controls.size(); ++i) {
                if (i) name += ',';
                if (!g.controls[i].positive) name += '!';
                name += "q" + std::to_string(g.controls[i].qubit);
            }
            name += ']';
        }
        out += name + " q" + std::to_string(g.target) + "\n";
    }
    return out;
}

/// Parses export_text output. The returned circuit has a flat layout; angles
/// carry 12 significant digits.
inline Circuit parse_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    std::optional<Circuit> circuit;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::string where = "circuit line " + std::to_string(line_no);
        if (!circuit) {
            if (line.substr(0, 7) != "qubits ") throw FormatError(where + ": expected 'qubits <N>'");
            int n = 0;
            for (char ch : line.substr(7)) {
                if (ch < '0' || ch > '9') throw FormatError(where + ": bad qubit count");
                n = n * 10 + (ch - '0');
                if (n > 64) throw FormatError(where + ": qubit count too large");
            }
            if (n < 1) throw FormatError(where + ": bad qubit count");
            circuit.emplace(layouts::flat(n), "parsed");
            continue;
        }

        const auto sp = line.find(' ');
        if (sp == std::string_view::npos) throw FormatError(where + ": missing operand");
        std::string_view op = line.substr(0, sp);
        std::string_view rest = detail::trim(line.substr(sp + 1));

        Gate g;
        bool controlled = false;
        if (op == "mcx") {
            g.kind = GateKind::X;
            controlled = true;
        } else {
            if (op.size() > 1 && op[0] == 'c' && op.substr(0, 5) != "reset") {
                controlled = true;
                op.remove_prefix(1);
            }
            if (op == "h") {
                g.kind = GateKind::H;
            } else if (op == "x") {
                g.kind = GateKind::X;
            } else if (op == "reset") {
                g.kind = GateKind::Reset;
            } else if (op.substr(0, 3) == "ry(" && op.back() == ')') {
                g.kind = GateKind::RY;
                const std::string num(op.substr(3, op.size() - 4));
                std::size_t used = 0;
                try {
                    g.angle = std::stod(num, &used);
                } catch (const std::exception&) {
                    throw FormatError(where + ": bad angle");
                }
                if (used != num.size()) throw FormatError(where + ": bad angle");
            } else {
                throw FormatError(where + ": unknown gate '" + std::string(op) + "'");
            }
        }

        if (controlled) {
            if (rest.empty() || rest.front() != '[') throw FormatError(where + ": expected control list");
            const auto close = rest.find(']');
            if (close == std::string_view::npos) throw FormatError(where + ": unterminated control list");
            std::string_view list = rest.substr(1, close - 1);
            rest = detail::trim(rest.substr(close + 1));
            while (!list.empty()) {
                const auto comma = list.find(',');
                std::string_view tok = detail::trim(list.substr(0, comma));
                Control k;
                if (!tok.empty() && tok.front() == '!') {
                    k.positive = false;
                    tok.remove_prefix(1);
                }
                k.qubit = detail::parse_qubit(tok, line_no);
                g.controls.push_back(k);
                if (comma == std::string_view::npos) break;
                list.remove_prefix(comma + 1);
            }
            if (g.controls.empty()) throw FormatError(where + ": empty control list");
        }
        g.target = detail::parse_qubit(rest, line_no);
        try {
            circuit->add(std::move(g));
        } catch (const InvalidArgument& e) {
            throw FormatError(where + ": " + e.what());
        }
    }
    if (!circuit) throw FormatError("circuit: missing 'qubits <N>' line");
    return *std::move(circuit);
}

} // namespace palqa
