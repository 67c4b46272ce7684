#pragma once

// Shared oracle helpers for the test suites: everything here goes through
// the simulator only, never through the synthesis paths under test.

#include <complex>
#include <random>
#include <vector>

#include "ctrlsyn/circuit.hpp"
#include "ctrlsyn/gf2.hpp"
#include "ctrlsyn/sim.hpp"

namespace test_oracles {

using ctrlsyn::circuit::Circuit;
using ctrlsyn::circuit::GateKind;
using ctrlsyn::sim::cplx;
using ctrlsyn::sim::SparseState;

inline ctrlsyn::gf2::BitMatrix random_invertible(int n, std::mt19937_64& rng) {
    for (;;) {
        ctrlsyn::gf2::BitMatrix m(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) m.set(i, j, rng() & 1);
        if (ctrlsyn::gf2::eliminate(m).inverse) return m;
    }
}

inline ctrlsyn::gf2::BitMatrix cyclic_shift_matrix(int n) {
    ctrlsyn::gf2::BitMatrix m(n, n);
    for (int i = 0; i + 1 < n; i++) m.set(i + 1, i, true);
    m.set(0, n - 1, true);
    return m;
}

inline Circuit random_clifford_circuit(int n, int len, std::mt19937_64& rng) {
    Circuit c(n);
    for (int i = 0; i < len; i++) {
        int a = (int)(rng() % n), b = (int)(rng() % n);
        switch (rng() % 8) {
            case 0: c.h(a); break;
            case 1: c.s(a); break;
            case 2: c.sdg(a); break;
            case 3: c.x(a); break;
            case 4: c.z(a); break;
            case 5:
                if (a != b) c.cnot(a, b);
                break;
            case 6:
                if (a != b) c.cz(a, b);
                break;
            case 7:
                if (a != b) c.swap(a, b);
                break;
        }
    }
    return c;
}

struct ControlledCheck {
    bool pass = false;
    double max_deviation = 0;
    std::string failure;
};

// Does `cand` implement c(U) for the (measurement-free) n-qubit circuit
// `input`? cand: control wire 0, targets 1..n, clean ancillas trailing.
// Sweeps all basis inputs; measurement branches each must hit the target
// state, with one phase common to everything.
inline ControlledCheck check_controlled(const Circuit& input, const Circuit& cand,
                                        double tol = 1e-9) {
    ControlledCheck res;
    int n = input.total_qubits();
    if (cand.n_qubits != n + 1) {
        res.failure = "wire count mismatch";
        return res;
    }
    std::vector<uint8_t> nobits;
    // precompute U|x>
    std::vector<SparseState> ux(size_t(1) << n);
    for (uint64_t x = 0; x < (uint64_t(1) << n); x++) {
        SparseState st = SparseState::basis(n, x);
        for (auto& g : input.gates) ctrlsyn::sim::apply_gate(st, g, nobits);
        ux[x] = std::move(st);
    }
    cplx phase(0, 0);
    bool phase_set = false;
    for (uint64_t k = 0; k < (uint64_t(1) << (n + 1)); k++) {
        uint64_t a = k & 1, x = k >> 1;
        // reference on cand's wire layout: control bit 0, data bits 1..n
        SparseState ref;
        ref.n_wires = n + 1;
        if (a == 0) {
            ref.amps[x << 1] = 1.0;
        } else {
            for (auto& [key, amp] : ux[x].amps) ref.amps[(key << 1) | 1] = amp;
        }
        SparseState in = SparseState::basis(cand.total_qubits(), k);
        auto branches = ctrlsyn::sim::run_branches(cand, in, /*merge=*/true);
        for (auto& br : branches) {
            double leaked = 0;
            SparseState reduced;
            reduced.n_wires = n + 1;
            for (auto& [key, amp] : br.state.amps) {
                if (key >> (n + 1))
                    leaked += std::norm(amp);
                else
                    reduced.amps[key] = amp;
            }
            if (leaked > tol * tol) {
                res.failure = "ancilla_not_restored";
                res.max_deviation = std::sqrt(leaked);
                return res;
            }
            if (!phase_set) {
                // align via the largest reference amplitude
                uint64_t bk = 0;
                double best = 0;
                for (auto& [key, amp] : ref.amps)
                    if (std::abs(amp) > best) {
                        best = std::abs(amp);
                        bk = key;
                    }
                cplx other = reduced.amp(bk);
                if (std::abs(other) < 0.5 * best) {
                    res.failure = "mismatch";
                    res.max_deviation = 1.0;
                    return res;
                }
                phase = other / ref.amps.at(bk);
                phase /= std::abs(phase);
                phase_set = true;
            }
            double dev = 0;
            for (auto& [key, amp] : ref.amps)
                dev = std::max(dev, std::abs(amp * phase - reduced.amp(key)));
            for (auto& [key, amp] : reduced.amps)
                dev = std::max(dev, std::abs(amp - phase * ref.amp(key)));
            res.max_deviation = std::max(res.max_deviation, dev);
            if (res.max_deviation > tol) {
                res.failure = "mismatch";
                return res;
            }
        }
    }
    res.pass = true;
    return res;
}

}  // namespace test_oracles
