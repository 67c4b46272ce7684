#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ctrlsyn/gf2.hpp"

namespace ctrlsyn::circuit {

enum class GateKind {
    X,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    CNOT,
    CZ,
    SWAP,
    TOFFOLI,
    CCZ,
    MEASURE_X,
    CLASSICAL_Z,
    CLASSICAL_CZ,
};

int gate_arity(GateKind k);
bool is_clifford(GateKind k);
const char* gate_name(GateKind k);

struct Gate {
    GateKind kind;
    std::array<int, 3> q{-1, -1, -1};
    int bit = -1;  // result bit for MEASURE_X, condition bit for CLASSICAL_*
};

// Gate list IR. Wires [0, n_qubits) are data; wires [n_qubits,
// n_qubits+n_ancilla) are clean ancillas that start in |0> and must be
// measured out or returned to |0>.
struct Circuit {
    int n_qubits = 0;
    int n_ancilla = 0;
    int n_bits = 0;
    std::vector<Gate> gates;
    std::vector<int> layer_marks;  // optional gate-index layer boundaries

    Circuit() = default;
    explicit Circuit(int n, int anc = 0) : n_qubits(n), n_ancilla(anc) {}

    int total_qubits() const { return n_qubits + n_ancilla; }
    int add_ancilla() { return n_qubits + n_ancilla++; }

    void add(GateKind k, int a, int b = -1, int c = -1);
    void x(int q) { add(GateKind::X, q); }
    void z(int q) { add(GateKind::Z, q); }
    void h(int q) { add(GateKind::H, q); }
    void s(int q) { add(GateKind::S, q); }
    void sdg(int q) { add(GateKind::Sdg, q); }
    void t(int q) { add(GateKind::T, q); }
    void tdg(int q) { add(GateKind::Tdg, q); }
    void cnot(int ctrl, int tgt) { add(GateKind::CNOT, ctrl, tgt); }
    void cz(int a, int b) { add(GateKind::CZ, a, b); }
    void swap(int a, int b) { add(GateKind::SWAP, a, b); }
    void ccx(int a, int b, int tgt) { add(GateKind::TOFFOLI, a, b, tgt); }
    void ccz(int a, int b, int c) { add(GateKind::CCZ, a, b, c); }
    int measure_x(int q);
    void classical_z(int bit, int q);
    void classical_cz(int bit, int a, int b);

    // append another circuit, offsetting its wire w to map[w] and its
    // classical bits past ours
    void append_mapped(const Circuit& other, const std::vector<int>& wire_map);
    void append(const Circuit& other);  // identity wire map; ancillas must line up

    bool has_measurement() const;

    std::string to_text() const;
    static Circuit parse(const std::string& text);
};

enum class LoweringPolicy { ANCILLA_FREE, MEASURE_ASSISTED };

struct ResourceReport {
    long long toffoli_count = 0;
    long long toffoli_depth = 0;
    long long t_count = 0;
    long long t_depth = 0;
    long long cnot_count = 0;
    long long total_qubits = 0;
    long long ancilla_count = 0;
    long long reaction_depth = 0;
};

// Parity matrix A with U|x> = |Ax> of a CNOT/SWAP-only circuit (no ancillas).
gf2::BitMatrix parity_matrix(const Circuit& c);

// CNOT circuit realizing an invertible parity matrix, by Gaussian
// elimination; at most n^2 gates.
Circuit synth_cnot_from_matrix(const gf2::BitMatrix& a);

// Replace TOFFOLI/CCZ gates per policy. ANCILLA_FREE uses the 7-T, T-depth-3
// network; MEASURE_ASSISTED uses the 4-T, T-depth-1 construction with two
// clean ancillas, an X-measurement, and a classically controlled CZ fix-up.
Circuit lower_toffoli(const Circuit& c, LoweringPolicy policy);

// |a,b,0,0> -> |a,b,ab,0>: 4 T gates in one layer on wires a, b, the AND
// target g and the scratch wire hh (both taken in |0>), exact.
void emit_and_gadget(Circuit& out, int a, int b, int g, int hh);

// Toffoli metrics of c itself; T metrics of lower_toffoli(c, policy).
// Depths are ASAP layer counts over the qubit/classical-bit dependency DAG.
ResourceReport resource_report(const Circuit& c, LoweringPolicy policy);

long long toffoli_depth(const Circuit& c);
long long t_depth(const Circuit& c);
long long reaction_depth(const Circuit& c);

}  // namespace ctrlsyn::circuit
