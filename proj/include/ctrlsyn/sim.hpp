#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctrlsyn/circuit.hpp"

namespace ctrlsyn::sim {

using cplx = std::complex<double>;

struct IdentityHash {
    size_t operator()(uint64_t k) const { return k * 0x9e3779b97f4a7c15ull; }
};

// Statevector stored as a map from basis key to amplitude. Wire w is bit w
// of the key. Permutation and phase gates touch only the stored entries, so
// structured circuits on many wires stay cheap.
struct SparseState {
    int n_wires = 0;
    std::unordered_map<uint64_t, cplx, IdentityHash> amps;

    static SparseState basis(int n, uint64_t key) {
        SparseState s;
        s.n_wires = n;
        s.amps[key] = 1.0;
        return s;
    }
    double norm2() const {
        double s = 0;
        for (auto& [k, a] : amps) s += std::norm(a);
        return s;
    }
    void prune(double eps = 1e-14) {
        for (auto it = amps.begin(); it != amps.end();)
            it = std::abs(it->second) < eps ? amps.erase(it) : std::next(it);
    }
    void scale(cplx f) {
        for (auto& [k, a] : amps) a *= f;
    }
    cplx amp(uint64_t key) const {
        auto it = amps.find(key);
        return it == amps.end() ? cplx(0) : it->second;
    }
    cplx inner(const SparseState& o) const {  // <this|o>
        cplx s = 0;
        for (auto& [k, a] : amps) s += std::conj(a) * o.amp(k);
        return s;
    }
};

// Apply a non-measurement gate; `bits` supplies classical conditions.
void apply_gate(SparseState& st, const circuit::Gate& g, const std::vector<uint8_t>& bits);

struct BranchResult {
    std::vector<int8_t> outcome;  // per bit id: 0/1, or -1 when unset/merged away
    double probability = 0;
    SparseState state;  // normalized; measured wires frozen to |0>
};

// Enumerate measurement branches. With `merge` set, branches whose states
// coincide (and whose differing bits are never read again) are folded
// together, which keeps circuits with local measure-and-fix gadgets linear.
std::vector<BranchResult> run_branches(const circuit::Circuit& c, const SparseState& input,
                                       bool merge = false, size_t branch_cap = 4096);

struct Unitary {
    int q = 0;
    std::vector<cplx> m;  // row-major, dimension 2^q

    Unitary() = default;
    explicit Unitary(int q_) : q(q_), m(size_t(1) << (2 * q_), 0.0) {}
    size_t dim() const { return size_t(1) << q; }
    cplx& at(size_t r, size_t c) { return m[r * dim() + c]; }
    const cplx& at(size_t r, size_t c) const { return m[r * dim() + c]; }
};

// Column-by-column dense unitary; requires no measurements and <= 12 qubits.
Unitary unitary_of(const circuit::Circuit& c);

enum class EquivMode { UNITARY_GLOBAL_PHASE, BRANCHWISE_COMMON_PHASE };

struct EquivResult {
    bool pass = false;
    double max_deviation = 0;
    std::string failure;  // empty, "unitary_mismatch", "ancilla_not_restored",
                          // "branch_phase_mismatch", ...
};

// Check that cand implements ref. Data wires must agree; cand may carry
// extra clean ancillas, which are required to start and finish in |0>.
// UNITARY mode sweeps all basis inputs and demands one global phase;
// BRANCHWISE demands every measurement branch hit ref's output with one
// phase common to all branches and all inputs.
EquivResult assert_equiv(const circuit::Circuit& ref, const circuit::Circuit& cand,
                         EquivMode mode, double tol = 1e-9);

// Branchwise check against a reference circuit for one explicit input state
// (given on cand's data wires; cand ancillas are appended as |0>).
EquivResult branchwise_state_check(const circuit::Circuit& ref, const circuit::Circuit& cand,
                                   const SparseState& input, double tol = 1e-9);

}  // namespace ctrlsyn::sim
