#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "palqa/circuit.hpp"

using namespace palqa;

namespace {

std::vector<SparseCoeff> random_block_coeffs(oracle::Rng& rng, double density = 0.3) {
    std::vector<SparseCoeff> out;
    for (std::uint8_t y = 0; y < 8; ++y)
        for (std::uint8_t x = 0; x < 8; ++x)
            if (rng.unit() < density)
                out.push_back(SparseCoeff{0, x, y, static_cast<std::int8_t>(rng.below(2) ? 1 : -1),
                                          static_cast<std::uint8_t>(rng.range(1, 255))});
    return out;
}

std::size_t count_kind(const Circuit& c, GateKind k) {
    std::size_t n = 0;
    for (const auto& g : c.gates()) n += g.kind == k;
    return n;
}

} // namespace

TEST(Layout, BlockLayoutMatchesQubitBudget) {
    const auto l = layouts::block();
    EXPECT_EQ(l.total, l.value_bits + l.x_bits + l.y_bits + 1);
    EXPECT_EQ(l.total, 17);
    EXPECT_EQ(*l.aux, 8);
    EXPECT_EQ(l.x_qubit(0), 9);
    EXPECT_EQ(l.superposed_qubits(), (std::vector<int>{9, 10, 11, 13, 14, 15}));

    const auto p = layouts::palqa_block();
    EXPECT_EQ(*p.trash_qubit(), 9);
    EXPECT_EQ(p.x_qubit(0), 12);
    EXPECT_EQ(p.superposed_qubits(), (std::vector<int>{10, 11, 12, 13, 14, 15}));

    const auto nz = layouts::nzneqr(1024, 1024);
    EXPECT_EQ(nz.x_bits, 11);
    EXPECT_EQ(nz.y_bits, 11);
}

TEST(Circuit, RejectsBadGates) {
    Circuit c(layouts::block(), "t");
    EXPECT_THROW(c.add(x_gate(17)), InvalidArgument);
    EXPECT_THROW(c.add(x_gate(3, {{3, true}})), InvalidArgument);
    EXPECT_THROW(c.add(x_gate(3, {{4, true}, {4, false}})), InvalidArgument);
    EXPECT_THROW(c.add(Gate{GateKind::Reset, 8, {{1, true}}, 0.0}), InvalidArgument);
    EXPECT_THROW(c.add(ry_gate(0, std::nan(""))), InvalidArgument);
}

TEST(Frqi, Structure) {
    const std::array<double, 4> theta{0.3, 0.7, 1.1, 1.5};
    const auto c = build_frqi(theta);
    EXPECT_EQ(c.qubits(), 3);
    EXPECT_EQ(count_kind(c, GateKind::H), 2U);
    EXPECT_EQ(count_kind(c, GateKind::RY), 4U);
    const auto& last = c.gates().back();
    EXPECT_DOUBLE_EQ(last.angle, 3.0);
    EXPECT_EQ(last.controls.size(), 2U);
    EXPECT_TRUE(last.controls[0].positive && last.controls[1].positive);

    const std::array<double, 4> bad{0.1, 0.2, 2.0, 0.3};
    EXPECT_THROW(build_frqi(bad), InvalidArgument);
    const std::array<double, 3> short_list{0.1, 0.2, 0.3};
    EXPECT_THROW(build_frqi(short_list), InvalidArgument);
}

TEST(Neqr, TwoByTwoGateCount) {
    const std::vector<std::uint8_t> px{0, 100, 200, 255};
    const auto c = build_neqr(px);
    EXPECT_EQ(c.qubits(), 10);
    EXPECT_EQ(count_kind(c, GateKind::H), 2U);
    EXPECT_EQ(count_gates(c).mcx, 14U);
    for (const auto& g : c.gates()) {
        if (g.kind == GateKind::X) {
            EXPECT_EQ(g.controls.size(), 2U);
        }
    }
}

TEST(Neqr, ZeroImageIsHadamardsOnly) {
    const std::vector<std::uint8_t> px(16, 0);
    const auto c = build_neqr(px);
    EXPECT_EQ(c.gates().size(), 4U);
    EXPECT_EQ(count_kind(c, GateKind::H), 4U);
    EXPECT_THROW(build_neqr(std::vector<std::uint8_t>(6)), InvalidArgument);
}

TEST(NzNeqr, Counts) {
    const auto empty = build_nzneqr({}, 16, 8);
    EXPECT_EQ(empty.gates().size(), count_kind(empty, GateKind::H));

    const std::vector<SparseCoeff> one{{0, 0, 0, 1, 1}};
    const auto c = build_nzneqr(one, 16, 16);
    EXPECT_EQ(c.gates().size() - count_kind(c, GateKind::H), 2U);
    EXPECT_EQ(c.gates().back().target, 0);                   // value gate
    EXPECT_EQ(c.gates()[c.gates().size() - 2].target, 8);   // aux gate first

    const std::vector<SparseCoeff> out_of_range{{4, 0, 0, 1, 1}};
    EXPECT_THROW(build_nzneqr(out_of_range, 16, 16), InvalidArgument);
}

TEST(NzNeqr, GateCountLinearInPopcountSum) {
    oracle::Rng rng(61);
    for (int i = 0; i < 50; ++i) {
        std::vector<SparseCoeff> cs;
        const std::uint32_t nblocks = 4;
        for (std::uint32_t b = 0; b < nblocks; ++b) {
            auto part = random_block_coeffs(rng, 0.2);
            for (auto& c : part) c.block_index = b;
            cs.insert(cs.end(), part.begin(), part.end());
        }
        std::size_t pop = 0;
        for (const auto& c : cs) pop += static_cast<std::size_t>(oracle::popcount(c.magnitude));
        const auto circuit = build_nzneqr(cs, 16, 16);
        EXPECT_EQ(circuit.gates().size() - count_kind(circuit, GateKind::H), pop + cs.size());
    }
}

TEST(Zscneqr, SingleCoefficientCount) {
    const std::vector<SparseCoeff> one{{0, 1, 0, 1, 6}};
    const auto c = build_zscneqr(one);
    const auto n = count_gates(c);
    EXPECT_EQ(n.h, 6U);
    EXPECT_EQ(n.mcx, 2U);
    EXPECT_EQ(n.x, 1U);
    EXPECT_EQ(n.reset, 1U);
    EXPECT_EQ(n.total, 10U);
    // value gates: aux + 8 position controls
    EXPECT_EQ(c.gates()[7].controls.size(), 9U);

    const auto empty = build_zscneqr({});
    EXPECT_EQ(empty.gates().size(), 6U);
}

TEST(Zscneqr, Errors) {
    const std::vector<SparseCoeff> bad_pos{{0, 8, 0, 1, 1}};
    EXPECT_THROW(build_zscneqr(bad_pos), InvalidArgument);
    const std::vector<SparseCoeff> two_blocks{{0, 0, 0, 1, 1}, {1, 0, 0, 1, 1}};
    EXPECT_THROW(build_zscneqr(two_blocks), InvalidArgument);
    const std::vector<SparseCoeff> unordered{{0, 3, 0, 1, 1}, {0, 1, 0, 1, 1}};
    EXPECT_THROW(build_zscneqr(unordered), InvalidArgument);
}

TEST(Palqa, EvenPositionsNeverTouchTrash) {
    const std::vector<SparseCoeff> cs{{0, 0, 0, 1, 5}, {0, 2, 1, -1, 3}, {0, 6, 7, 1, 200}};
    const auto c = build_palqa(cs);
    EXPECT_EQ(gates_touching(c, 9), 0U);
}

TEST(Palqa, OddPositionsTouchTrashOnceEach) {
    const std::vector<SparseCoeff> cs{{0, 1, 0, 1, 5}, {0, 2, 0, 1, 7}, {0, 3, 2, -1, 3}, {0, 7, 7, 1, 255}};
    const auto c = build_palqa(cs);
    EXPECT_EQ(gates_touching(c, 9), 3U);
    for (const auto& g : c.gates())
        for (const auto& k : g.controls) EXPECT_NE(k.qubit, 9);
}

TEST(Palqa, ConnectionSavingVersusZscneqr) {
    oracle::Rng rng(67);
    for (int i = 0; i < 100; ++i) {
        const auto cs = random_block_coeffs(rng);
        const auto split = split_lsb(std::span<const SparseCoeff>(cs));
        const auto ones = encode_ones(split.plane);
        const auto z = build_zscneqr(cs);
        const auto p = build_palqa(cs, split.x_high, ones);
        EXPECT_EQ(position_connections(z), 8 * cs.size());
        EXPECT_EQ(position_connections(p), position_connections(z) - (cs.size() - ones.indices.size()));
        EXPECT_EQ(gates_touching(p, 9), ones.indices.size());
        EXPECT_EQ(count_gates(p).total, count_gates(z).total + ones.indices.size());
    }
}

TEST(Palqa, InconsistentInputs) {
    const std::vector<SparseCoeff> cs{{0, 1, 0, 1, 5}};
    const std::vector<std::uint8_t> high{0, 1};
    EXPECT_THROW(build_palqa(cs, high, OnesList{1, {0}}), InvalidArgument);
    const std::vector<std::uint8_t> ok{0};
    EXPECT_THROW(build_palqa(cs, ok, OnesList{2, {0}}), InvalidArgument);
}

TEST(Palqa, ZeroDiscardNoGateForZeroBits) {
    oracle::Rng rng(71);
    const auto cs = random_block_coeffs(rng);
    const auto c = build_palqa(cs);
    std::size_t value_gates = 0;
    for (const auto& g : c.gates())
        if (g.target < 8) ++value_gates;
    std::size_t pop = 0;
    for (const auto& k : cs) pop += static_cast<std::size_t>(oracle::popcount(k.magnitude));
    EXPECT_EQ(value_gates, pop);
}

TEST(TextFormat, Lines) {
    Circuit c(layouts::block(), "t");
    c.add(h_gate(16));
    c.add(x_gate(0, {{9, true}, {10, false}}));
    c.add(ry_gate(1, 0.5, {{2, true}}));
    c.add(ry_gate(1, 0.25));
    c.add(reset_gate(8));
    EXPECT_EQ(export_text(c), "qubits 17\nh q16\nmcx [q9,!q10] q0\ncry(0.5) [q2] q1\nry(0.25) q1\nreset q8\n");
}

TEST(TextFormat, ParseErrors) {
    EXPECT_THROW(parse_text("h q0\n"), FormatError);
    EXPECT_THROW(parse_text("qubits 2\nfoo q0\n"), FormatError);
    EXPECT_THROW(parse_text("qubits 2\nh q5\n"), FormatError);
    EXPECT_THROW(parse_text("qubits 2\nmcx [q0 q1\n"), FormatError);
    EXPECT_THROW(parse_text("qubits 2\nmcx [q1] q1\n"), FormatError);
    const auto c = parse_text("# header comment\nqubits 3\n# gate comment\nh q0\n");
    EXPECT_EQ(c.gates().size(), 1U);
}

TEST(TextFormat, RoundTripRandomCircuits) {
    oracle::Rng rng(73);
    for (int i = 0; i < 200; ++i) {
        const int n = rng.range(2, 20);
        Circuit c(layouts::flat(n), "rand");
        const int gates = rng.range(0, 40);
        for (int g = 0; g < gates; ++g) {
            const int target = rng.range(0, n - 1);
            std::vector<Control> ctrl;
            for (int q = 0; q < n; ++q)
                if (q != target && rng.below(4) == 0) ctrl.push_back({q, rng.below(2) == 0});
            switch (rng.below(4)) {
            case 0: c.add(Gate{GateKind::H, target, ctrl, 0.0}); break;
            case 1: c.add(x_gate(target, ctrl)); break;
            case 2: c.add(ry_gate(target, rng.unit() * 2 * std::numbers::pi, ctrl)); break;
            default: c.add(reset_gate(target)); break;
            }
        }
        const auto text = export_text(c);
        const auto back = parse_text(text);
        ASSERT_EQ(back.qubits(), c.qubits());
        ASSERT_EQ(back.gates().size(), c.gates().size());
        for (std::size_t k = 0; k < c.gates().size(); ++k) {
            const auto& a = c.gates()[k];
            const auto& b = back.gates()[k];
            ASSERT_EQ(a.kind, b.kind);
            ASSERT_EQ(a.target, b.target);
            ASSERT_EQ(a.controls, b.controls);
            ASSERT_NEAR(a.angle, b.angle, 1e-11 * std::max(1.0, std::abs(a.angle)));
        }
        ASSERT_EQ(export_text(back), text);
    }
}

TEST(TextFormat, BuildersAreDeterministic) {
    oracle::Rng rng(79);
    const auto cs = random_block_coeffs(rng);
    EXPECT_EQ(export_text(build_palqa(cs)), export_text(build_palqa(cs)));
    EXPECT_EQ(export_text(build_zscneqr(cs)), export_text(build_zscneqr(cs)));
}
