#pragma once

// Statevector check of one block: build ZSCNEQR and PALQA circuits, simulate,
// decode, and compare against the quantized block.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "palqa/circuit.hpp"
#include "palqa/costmodel.hpp"
#include "palqa/lsbswap.hpp"
#include "palqa/simulator.hpp"
#include "palqa/transform.hpp"

namespace palqa {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    std::size_t entries_zscneqr = 0;
    std::size_t entries_palqa = 0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
    void add(std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    }
};

namespace detail {

inline void check_circuit(VerifyReport& report, const std::string& tag, const Circuit& circuit,
                          const QuantBlock& expected, std::span<const std::int8_t> signs, int max_qubits,
                          std::vector<DecodedEntry>& entries) {
    StateVector state;
    try {
        state = simulate(circuit, max_qubits);
    } catch (const SimulationError& e) {
        report.add(tag + ".simulate", false, e.what());
        return;
    }
    report.add(tag + ".simulate", true);
    report.add(tag + ".norm", std::abs(state.norm_squared() - 1.0) <= 1e-10);

    entries = decode_state(state, circuit.layout());
    const auto h = circuit.layout().superposed_qubits().size();
    const double expected_amp = 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << h));
    report.add(tag + ".entries", entries.size() == (std::size_t{1} << h),
               std::to_string(entries.size()) + " basis states");
    report.add(tag + ".uniform_amplitude", uniform_magnitude(entries, expected_amp, 1e-10));
    try {
        const QuantBlock got = reconstruct_block(entries, signs);
        report.add(tag + ".reconstruct", got == expected);
    } catch (const InvalidArgument& e) {
        report.add(tag + ".reconstruct", false, e.what());
    }
}

} // namespace detail

/// `coeffs` are one block's coefficients (canonical order, block index 0);
/// `expected` is the quantized block they came from. With `tamper`, one
/// extra X on q0 is appended to the PALQA circuit as a negative control.
inline VerifyReport verify_block(std::span<const SparseCoeff> coeffs, const QuantBlock& expected, bool tamper = false,
                                 int max_qubits = kDefaultMaxQubits) {
    VerifyReport report;
    std::vector<std::int8_t> signs;
    for (const auto& c : coeffs) signs.push_back(c.sign);

    const Circuit zsc = build_zscneqr(coeffs);
    const auto split = split_lsb(coeffs);
    const OnesList ones = encode_ones(split.plane);
    Circuit pal = build_palqa(coeffs, split.x_high, ones);
    if (tamper) pal.add(x_gate(0));

    std::vector<DecodedEntry> ez;
    std::vector<DecodedEntry> ep;
    detail::check_circuit(report, "zscneqr", zsc, expected, signs, max_qubits, ez);
    detail::check_circuit(report, "palqa", pal, expected, signs, max_qubits, ep);
    report.entries_zscneqr = ez.size();
    report.entries_palqa = ep.size();

    // trash qubit holds the regenerated LSB exactly on nonzero odd-x branches
    bool trash_ok = !ep.empty();
    for (const auto& e : ep) trash_ok = trash_ok && e.trash == ((e.value != 0 && (e.x & 1U)) ? 1 : 0);
    report.add("palqa.trash_reconnect", trash_ok);

    const int trash = *pal.layout().trash_qubit();
    report.add("palqa.trash_touches", gates_touching(pal, trash) == ones.indices.size(),
               std::to_string(gates_touching(pal, trash)) + " gates on q" + std::to_string(trash) + ", " +
                   std::to_string(ones.indices.size()) + " ones");

    const auto b_state = count_b_state(coeffs, ones);
    report.add("palqa.connections_match_b_state", position_connections(pal) == b_state,
               std::to_string(position_connections(pal)) + " vs " + std::to_string(b_state));
    report.add("zscneqr.connections_unswapped", position_connections(zsc) == count_b_state_unswapped(coeffs));
    return report;
}

} // namespace palqa
