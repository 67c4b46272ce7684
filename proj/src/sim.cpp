#include "ctrlsyn/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ctrlsyn::sim {

using circuit::Circuit;
using circuit::Gate;
using circuit::GateKind;

namespace {

const double INV_SQRT2 = 1.0 / std::numbers::sqrt2;
const cplx T_PHASE = std::polar(1.0, std::numbers::pi / 4);

template <class F>
void permute_keys(SparseState& st, F keyfn) {
    std::unordered_map<uint64_t, cplx, IdentityHash> out;
    out.reserve(st.amps.size());
    for (auto& [k, a] : st.amps) out[keyfn(k)] += a;
    st.amps = std::move(out);
}

}  // namespace

void apply_gate(SparseState& st, const Gate& g, const std::vector<uint8_t>& bits) {
    uint64_t m0 = g.q[0] >= 0 ? uint64_t(1) << g.q[0] : 0;
    uint64_t m1 = g.q[1] >= 0 ? uint64_t(1) << g.q[1] : 0;
    uint64_t m2 = g.q[2] >= 0 ? uint64_t(1) << g.q[2] : 0;
    switch (g.kind) {
        case GateKind::X:
            permute_keys(st, [&](uint64_t k) { return k ^ m0; });
            break;
        case GateKind::Z:
            for (auto& [k, a] : st.amps)
                if (k & m0) a = -a;
            break;
        case GateKind::S:
            for (auto& [k, a] : st.amps)
                if (k & m0) a *= cplx(0, 1);
            break;
        case GateKind::Sdg:
            for (auto& [k, a] : st.amps)
                if (k & m0) a *= cplx(0, -1);
            break;
        case GateKind::T:
            for (auto& [k, a] : st.amps)
                if (k & m0) a *= T_PHASE;
            break;
        case GateKind::Tdg:
            for (auto& [k, a] : st.amps)
                if (k & m0) a *= std::conj(T_PHASE);
            break;
        case GateKind::H: {
            std::unordered_map<uint64_t, cplx, IdentityHash> out;
            out.reserve(st.amps.size() * 2);
            for (auto& [k, a] : st.amps) {
                cplx h = a * INV_SQRT2;
                out[k & ~m0] += h;
                out[k | m0] += (k & m0) ? -h : h;
            }
            st.amps = std::move(out);
            st.prune();
            break;
        }
        case GateKind::CNOT:
            permute_keys(st, [&](uint64_t k) { return (k & m0) ? k ^ m1 : k; });
            break;
        case GateKind::CZ:
            for (auto& [k, a] : st.amps)
                if ((k & m0) && (k & m1)) a = -a;
            break;
        case GateKind::SWAP:
            permute_keys(st, [&](uint64_t k) {
                uint64_t b0 = (k >> g.q[0]) & 1, b1 = (k >> g.q[1]) & 1;
                if (b0 == b1) return k;
                return k ^ m0 ^ m1;
            });
            break;
        case GateKind::TOFFOLI:
            permute_keys(st, [&](uint64_t k) { return ((k & m0) && (k & m1)) ? k ^ m2 : k; });
            break;
        case GateKind::CCZ:
            for (auto& [k, a] : st.amps)
                if ((k & m0) && (k & m1) && (k & m2)) a = -a;
            break;
        case GateKind::CLASSICAL_Z:
            if (bits[g.bit])
                for (auto& [k, a] : st.amps)
                    if (k & m0) a = -a;
            break;
        case GateKind::CLASSICAL_CZ:
            if (bits[g.bit])
                for (auto& [k, a] : st.amps)
                    if ((k & m0) && (k & m1)) a = -a;
            break;
        case GateKind::MEASURE_X:
            throw std::logic_error("apply_gate: measurement must go through run_branches");
    }
}

namespace {

struct Branch {
    SparseState state;  // kept normalized
    double probability = 1.0;
    std::vector<int8_t> bits;
};

bool states_equal(const SparseState& a, const SparseState& b, double eps) {
    if (a.amps.size() != b.amps.size()) {
        // sizes may differ by near-zero entries; fall through to full compare
    }
    for (auto& [k, v] : a.amps)
        if (std::abs(v - b.amp(k)) > eps) return false;
    for (auto& [k, v] : b.amps)
        if (std::abs(v - a.amp(k)) > eps) return false;
    return true;
}

}  // namespace

std::vector<BranchResult> run_branches(const Circuit& c, const SparseState& input,
                                       bool merge, size_t branch_cap) {
    if (input.n_wires != c.total_qubits())
        throw std::invalid_argument("run_branches: input wire count mismatch");
    std::vector<Branch> branches(1);
    branches[0].state = input;
    branches[0].bits.assign(c.n_bits, -1);

    // bits still read by gates at index >= i (suffix union of conditions)
    std::vector<std::vector<uint8_t>> bits_read_after(c.gates.size() + 1,
                                                      std::vector<uint8_t>(c.n_bits, 0));
    for (int i = (int)c.gates.size() - 1; i >= 0; i--) {
        bits_read_after[i] = bits_read_after[i + 1];
        const Gate& g = c.gates[i];
        if (g.kind == GateKind::CLASSICAL_Z || g.kind == GateKind::CLASSICAL_CZ)
            bits_read_after[i][g.bit] = 1;
    }

    std::vector<uint8_t> bitvals(c.n_bits, 0);
    for (size_t gi = 0; gi < c.gates.size(); gi++) {
        const Gate& g = c.gates[gi];
        if (g.kind != GateKind::MEASURE_X) {
            for (auto& br : branches) {
                for (int b = 0; b < c.n_bits; b++) bitvals[b] = br.bits[b] == 1;
                apply_gate(br.state, g, bitvals);
            }
            continue;
        }
        uint64_t mask = uint64_t(1) << g.q[0];
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (auto& br : branches) {
            for (int m = 0; m < 2; m++) {
                SparseState proj;
                proj.n_wires = br.state.n_wires;
                proj.amps.reserve(br.state.amps.size());
                for (auto& [k, a] : br.state.amps) {
                    cplx v = a * INV_SQRT2;
                    if (m == 1 && (k & mask)) v = -v;
                    proj.amps[k & ~mask] += v;
                }
                proj.prune();
                double p = proj.norm2();
                if (p < 1e-18) continue;
                proj.scale(1.0 / std::sqrt(p));
                Branch nb;
                nb.state = std::move(proj);
                nb.probability = br.probability * p;
                nb.bits = br.bits;
                nb.bits[g.bit] = (int8_t)m;
                next.push_back(std::move(nb));
            }
        }
        branches = std::move(next);
        if (merge && branches.size() > 1) {
            const auto& live = bits_read_after[gi + 1];
            std::vector<Branch> kept;
            for (auto& br : branches) {
                bool merged = false;
                for (auto& k : kept) {
                    bool bits_ok = true;
                    for (int b = 0; b < c.n_bits; b++)
                        if (live[b] && k.bits[b] != br.bits[b]) {
                            bits_ok = false;
                            break;
                        }
                    if (bits_ok && states_equal(k.state, br.state, 1e-12)) {
                        k.probability += br.probability;
                        for (int b = 0; b < c.n_bits; b++)
                            if (k.bits[b] != br.bits[b]) k.bits[b] = -1;
                        merged = true;
                        break;
                    }
                }
                if (!merged) kept.push_back(std::move(br));
            }
            branches = std::move(kept);
        }
        if (branches.size() > branch_cap)
            throw std::runtime_error("run_branches: branch cap exceeded");
    }

    std::vector<BranchResult> out;
    out.reserve(branches.size());
    for (auto& br : branches) {
        BranchResult r;
        r.outcome = std::move(br.bits);
        r.probability = br.probability;
        r.state = std::move(br.state);
        out.push_back(std::move(r));
    }
    return out;
}

Unitary unitary_of(const Circuit& c) {
    int q = c.total_qubits();
    if (q > 12) throw std::invalid_argument("unitary_of: more than 12 qubits");
    if (c.has_measurement()) throw std::invalid_argument("unitary_of: measurement present");
    Unitary u(q);
    std::vector<uint8_t> nobits(c.n_bits, 0);
    for (uint64_t col = 0; col < u.dim(); col++) {
        SparseState st = SparseState::basis(q, col);
        for (const Gate& g : c.gates) apply_gate(st, g, nobits);
        for (auto& [k, a] : st.amps) u.at(k, col) = a;
    }
    return u;
}

namespace {

// phase factor aligning b to a (a ~ e^{i phi} b), from the largest entry of b
cplx phase_between(const SparseState& ref, const SparseState& other) {
    uint64_t best_key = 0;
    double best = 0;
    for (auto& [k, a] : ref.amps) {
        if (std::abs(a) > best) {
            best = std::abs(a);
            best_key = k;
        }
    }
    if (best < 1e-12) return cplx(1, 0);
    cplx o = other.amp(best_key);
    if (std::abs(o) < 1e-12) return cplx(0, 0);  // cannot align
    cplx f = o / ref.amps.at(best_key);
    return f / std::abs(f);
}

double max_entry_deviation(const SparseState& a, const SparseState& b) {
    double worst = 0;
    for (auto& [k, v] : a.amps) worst = std::max(worst, std::abs(v - b.amp(k)));
    for (auto& [k, v] : b.amps) worst = std::max(worst, std::abs(v - a.amp(k)));
    return worst;
}

}  // namespace

EquivResult assert_equiv(const Circuit& ref, const Circuit& cand, EquivMode mode, double tol) {
    EquivResult res;
    if (ref.has_measurement()) {
        res.failure = "reference has measurements";
        return res;
    }
    int d = ref.total_qubits();
    if (cand.n_qubits != d) {
        res.failure = "data wire count mismatch";
        return res;
    }
    if (d > 14) throw std::invalid_argument("assert_equiv: too many data wires");
    int anc = cand.n_ancilla;
    std::vector<uint8_t> nobits(std::max(ref.n_bits, 1), 0);
    cplx phase(0, 0);
    bool phase_set = false;
    for (uint64_t x = 0; x < (uint64_t(1) << d); x++) {
        SparseState rs = SparseState::basis(d, x);
        for (const Gate& g : ref.gates) apply_gate(rs, g, nobits);

        SparseState in = SparseState::basis(d + anc, x);
        auto check_one = [&](const SparseState& cs) -> bool {
            // clean ancillas must come back to |0>
            SparseState reduced;
            reduced.n_wires = d;
            double leaked = 0;
            for (auto& [k, a] : cs.amps) {
                if (k >> d) {
                    leaked += std::norm(a);
                    continue;
                }
                reduced.amps[k] = a;
            }
            if (leaked > tol * tol) {
                res.failure = "ancilla_not_restored";
                res.max_deviation = std::sqrt(leaked);
                return false;
            }
            if (!phase_set) {
                cplx f = phase_between(rs, reduced);
                if (std::abs(f) < 0.5) {
                    res.failure = mode == EquivMode::UNITARY_GLOBAL_PHASE ? "unitary_mismatch"
                                                                          : "branch_mismatch";
                    res.max_deviation = 1.0;
                    return false;
                }
                phase = f;
                phase_set = true;
            }
            SparseState aligned = reduced;
            aligned.scale(std::conj(phase));
            double dev = max_entry_deviation(rs, aligned);
            res.max_deviation = std::max(res.max_deviation, dev);
            if (dev > tol) {
                res.failure = mode == EquivMode::UNITARY_GLOBAL_PHASE ? "unitary_mismatch"
                                                                      : "branch_phase_mismatch";
                return false;
            }
            return true;
        };

        if (mode == EquivMode::UNITARY_GLOBAL_PHASE) {
            if (cand.has_measurement()) {
                res.failure = "candidate has measurements (use branchwise)";
                return res;
            }
            SparseState cs = in;
            for (const Gate& g : cand.gates) apply_gate(cs, g, nobits);
            if (!check_one(cs)) return res;
        } else {
            auto branches = run_branches(cand, in, /*merge=*/true);
            for (auto& br : branches)
                if (!check_one(br.state)) return res;
        }
    }
    res.pass = true;
    return res;
}

EquivResult branchwise_state_check(const Circuit& ref, const Circuit& cand,
                                   const SparseState& input, double tol) {
    EquivResult res;
    if (input.n_wires != ref.total_qubits() || cand.n_qubits != ref.total_qubits()) {
        res.failure = "wire count mismatch";
        return res;
    }
    std::vector<uint8_t> nobits(std::max(ref.n_bits, 1), 0);
    SparseState rs = input;
    for (const Gate& g : ref.gates) apply_gate(rs, g, nobits);

    SparseState in;
    in.n_wires = cand.total_qubits();
    in.amps = input.amps;  // ancilla bits zero
    auto branches = run_branches(cand, in);
    cplx phase(0, 0);
    bool phase_set = false;
    int d = ref.total_qubits();
    for (auto& br : branches) {
        SparseState reduced;
        reduced.n_wires = d;
        double leaked = 0;
        for (auto& [k, a] : br.state.amps) {
            if (k >> d)
                leaked += std::norm(a);
            else
                reduced.amps[k] = a;
        }
        if (leaked > tol * tol) {
            res.failure = "ancilla_not_restored";
            res.max_deviation = std::sqrt(leaked);
            return res;
        }
        if (!phase_set) {
            cplx f = phase_between(rs, reduced);
            if (std::abs(f) < 0.5) {
                res.failure = "branch_mismatch";
                res.max_deviation = 1.0;
                return res;
            }
            phase = f;
            phase_set = true;
        }
        SparseState aligned = reduced;
        aligned.scale(std::conj(phase));
        double dev = max_entry_deviation(rs, aligned);
        res.max_deviation = std::max(res.max_deviation, dev);
        if (dev > tol) {
            res.failure = "branch_phase_mismatch";
            return res;
        }
    }
    res.pass = true;
    return res;
}

}  // namespace ctrlsyn::sim
