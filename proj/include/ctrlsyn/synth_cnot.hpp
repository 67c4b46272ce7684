#pragma once

#include <vector>

#include "ctrlsyn/circuit.hpp"
#include "ctrlsyn/gf2.hpp"
#include "ctrlsyn/jordan.hpp"

namespace ctrlsyn::synth_cnot {

enum class Method { COUNT_OPTIMAL, CONST_DEPTH, DEPTH_ONE };

const char* method_name(Method m);

// Output layout: control qubit = wire 0, targets = wires 1..n, any clean
// ancillas trailing.
struct ControlledSynthesisResult {
    circuit::Circuit circuit;
    Method method;
    circuit::ResourceReport report;
    jordan::JordanDecomposition jordan;
};

// Outcome-dependent correction masks of the depth-one construction:
// u = D^T m and v = (A + A^{-1})^T m with D = A + I.
struct MeasurementCorrection {
    gf2::BitVec m, u, v;
};
MeasurementCorrection measurement_correction(const gf2::BitMatrix& a, const gf2::BitVec& m);

// c(C_f) on 1+d wires with exactly d Toffolis for d >= 2 (one fewer when the
// companion column is empty above the corner): controlled cyclic shift from
// SWAP triples plus a conditional CNOT fan with one promoted middle gate.
// Requires f(0) = 1; f = x+1 gives the empty circuit.
circuit::Circuit controlled_companion(const gf2::F2Poly& f);

// c(C_{(x+1)^d}) with d-1 Toffolis: the lower-bidiagonal CNOT ladder
// promoted to Toffolis, conjugated by the self-inverse triangular basis
// change M_d.
circuit::Circuit controlled_unipotent(int d);

enum class HermitianKind { X, SWAP, CNOT };

// One copy of a Hermitian target gate: wires for X = {q[0]}, for SWAP/CNOT =
// {q[0], q[1]} (CNOT source first).
struct Placement {
    int q0 = -1, q1 = -1;
};

// Toggle detection: c(V) applied at each placement, sharing control wire 0,
// inside a circuit with `total_wires` wires. 2 c(V)'s per copy. With enough
// borrowed wires everything runs in c(V)-depth 2; otherwise the copies are
// phase-split, borrowing from the idle half. An explicit `borrowed` list
// restricts which wires may be borrowed; empty means any idle wire.
circuit::Circuit controlled_parallel_hermitian(HermitianKind v,
                                               const std::vector<Placement>& placements,
                                               const std::vector<int>& borrowed,
                                               int total_wires);

// Controlled cyclic shift of n qubits (wire i+1 content moves to wire i+2,
// last wraps to wire 1): two SWAP reversal layers, each toggle-detected.
// 2(n-1) Toffolis, Toffoli-depth <= 8 without ancillas (n = 2 degenerates to
// a single Fredkin when no wire can be borrowed).
circuit::Circuit controlled_cyclic_shift(int n, const std::vector<int>& borrowed = {});

// Theorem-level backends; A must be invertible.
ControlledSynthesisResult controlled_cnot_min_count(const gf2::BitMatrix& a);
ControlledSynthesisResult controlled_cnot_const_depth(const gf2::BitMatrix& a);
ControlledSynthesisResult controlled_cnot_depth1(const gf2::BitMatrix& a);

// Reference circuit: literal c(U_A) built gate by gate from a CNOT
// realization of A (every CNOT promoted to a Toffoli). Oracle side only.
circuit::Circuit controlled_reference(const gf2::BitMatrix& a);

}  // namespace ctrlsyn::synth_cnot
