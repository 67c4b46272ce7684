#pragma once

#include <cstdint>
#include <vector>

#include "ctrlsyn/circuit.hpp"
#include "ctrlsyn/gf2.hpp"

namespace ctrlsyn::clifford {

// Stabilizer tableau: rows 0..n-1 hold the conjugated images of X_i, rows
// n..2n-1 of Z_i, each as (x-part, z-part, sign bit).
struct Tableau {
    int n = 0;
    std::vector<gf2::BitVec> xpart, zpart;  // 2n rows
    std::vector<uint8_t> phase;             // 2n sign bits

    static Tableau identity(int n);
    static Tableau of_circuit(const circuit::Circuit& c);

    void apply(circuit::GateKind k, int a, int b = -1);
    bool is_valid() const;  // symplectic form preserved
    bool operator==(const Tableau& o) const;

    // 2n x 2n symplectic matrix, rows = (x|z) of the generator images
    gf2::BitMatrix symplectic() const;
};

// The layered form H-C-P-C-P-C-H-P-C-P-C plus a trailing Pauli layer.
// H layers are qubit subsets, P layers per-qubit S exponents (0..3), C
// layers CNOT-circuit parity matrices.
struct LayeredClifford {
    int n = 0;
    std::vector<uint8_t> h1, h2;
    gf2::BitMatrix c1, c2, c3, c4, c5;
    std::vector<uint8_t> p1, p2, p3, p4;
    std::vector<uint8_t> pauli_x, pauli_z;

    circuit::Circuit to_circuit() const;
};

// Decompose a tableau into the layered form; recomposition is exact and is
// checked before returning.
LayeredClifford ag_normal_form(const Tableau& t);

enum class AncillaPolicy { FREE, CLEAN };

struct ControlledCliffordResult {
    circuit::Circuit circuit;  // control wire 0, targets 1..n, ancillas trailing
    circuit::ResourceReport report;
    AncillaPolicy policy;
    int padded_qubits = 0;  // idle wires added to reach the minimum width
};

// c(H) on (control 0, target t): 2 T-type gates, non-Clifford only on the
// target wire.
circuit::Circuit controlled_h(int t, int total_wires);

enum class SLayerMode { ANCILLA_FREE, CLEAN_ANCILLA };

// c(S^{e_q}) for per-target exponents (wire -> exponent 1..3, 2 meaning Z).
// Exact phase-polynomial gadget: T-count <= 2k+1, T-depth <= 2, no ancillas;
// the control phase additionally absorbs extra_control_phase (eighth turns).
circuit::Circuit controlled_s_layer(const std::vector<std::pair<int, int>>& exponents,
                                    SLayerMode mode, int total_wires,
                                    int extra_control_phase = 0);

enum class TLayerMode { BORROWED, CLEAN_ANCILLA };

// c(T^{e_t}) for per-target exponents +1/-1. CLEAN: one AND ancilla pair per
// target plus a fanned-out control copy; 5 T per target, T-depth 2,
// measurement-assisted uncompute. BORROWED: exact gadget on three borrowed
// wires per target (64 T per target before any further lowering).
circuit::Circuit controlled_t_layer(const std::vector<std::pair<int, int>>& exponents,
                                    TLayerMode mode, int total_wires);

// Controlled Clifford circuit via the layered normal form (Thm-level
// $T$-ceilings: FREE <= 182n count / 280 depth, CLEAN <= 36n / 17).
ControlledCliffordResult controlled_clifford(const circuit::Circuit& c, AncillaPolicy policy);

// Controlled Clifford+T circuit: T layers controlled one by one, interleaved
// Cliffords left uncontrolled, closed by an anti-controlled inverse Clifford.
ControlledCliffordResult controlled_clifford_t(const circuit::Circuit& c, AncillaPolicy policy);

}  // namespace ctrlsyn::clifford
