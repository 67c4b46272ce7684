#include "ctrlsyn/synth_cnot.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ctrlsyn::synth_cnot {

using circuit::Circuit;
using gf2::BitMatrix;
using gf2::BitVec;
using gf2::F2Poly;

const char* method_name(Method m) {
    switch (m) {
        case Method::COUNT_OPTIMAL: return "count";
        case Method::CONST_DEPTH: return "depth";
        case Method::DEPTH_ONE: return "depth1";
    }
    return "?";
}

MeasurementCorrection measurement_correction(const BitMatrix& a, const BitVec& m) {
    auto inv = gf2::inverse(a);
    if (!inv) throw std::invalid_argument("measurement_correction: singular matrix");
    MeasurementCorrection mc;
    mc.m = m;
    BitMatrix d = a + BitMatrix::identity(a.rows);
    mc.u = d.transpose().mul_vec(m);
    mc.v = (a + *inv).transpose().mul_vec(m);
    return mc;
}

namespace {

// one c(V) with control wire `anc`
void emit_cv(Circuit& c, HermitianKind v, int anc, const Placement& p) {
    switch (v) {
        case HermitianKind::X:
            c.cnot(anc, p.q0);
            break;
        case HermitianKind::SWAP:
            c.cnot(p.q0, p.q1);
            c.ccx(anc, p.q1, p.q0);
            c.cnot(p.q0, p.q1);
            break;
        case HermitianKind::CNOT:
            c.ccx(anc, p.q0, p.q1);
            break;
    }
}

// direct c(V) with control wire 0, no ancilla (1 Toffoli for SWAP/CNOT)
void emit_cv_direct(Circuit& c, HermitianKind v, const Placement& p) {
    emit_cv(c, v, 0, p);
}

int placement_width(HermitianKind v) { return v == HermitianKind::X ? 1 : 2; }

// the toggle-detected pair for one phase of copies
void emit_toggle_phase(Circuit& c, HermitianKind v, const std::vector<Placement>& copies,
                       const std::vector<int>& ancs) {
    for (size_t i = 0; i < copies.size(); i++) emit_cv(c, v, ancs[i], copies[i]);
    for (int a : ancs) c.cnot(0, a);
    for (size_t i = 0; i < copies.size(); i++) emit_cv(c, v, ancs[i], copies[i]);
    for (int a : ancs) c.cnot(0, a);
}

}  // namespace

circuit::Circuit controlled_parallel_hermitian(HermitianKind v,
                                               const std::vector<Placement>& placements,
                                               const std::vector<int>& borrowed,
                                               int total_wires) {
    Circuit c(total_wires);
    if (placements.empty()) return c;
    int w = placement_width(v);
    std::set<int> active;
    for (auto& p : placements) {
        active.insert(p.q0);
        if (w == 2) active.insert(p.q1);
    }
    for (int q : active)
        if (q <= 0 || q >= total_wires)
            throw std::invalid_argument("controlled_parallel_hermitian: placement out of range");
    if ((int)active.size() != (int)placements.size() * w)
        throw std::invalid_argument("controlled_parallel_hermitian: placements overlap");

    std::vector<int> pool;
    if (!borrowed.empty()) {
        for (int q : borrowed) {
            if (q <= 0 || q >= total_wires || active.count(q))
                throw std::invalid_argument("controlled_parallel_hermitian: bad borrowed wire");
            pool.push_back(q);
        }
        if (pool.size() < placements.size())
            throw std::invalid_argument("controlled_parallel_hermitian: not enough borrowed wires");
    } else {
        for (int q = 1; q < total_wires; q++)
            if (!active.count(q)) pool.push_back(q);
    }

    size_t k = placements.size();
    if (pool.size() >= k) {
        std::vector<int> ancs(pool.begin(), pool.begin() + k);
        emit_toggle_phase(c, v, placements, ancs);
        return c;
    }
    // phase-split: each group borrows from the idle groups
    size_t groups = 2;
    auto feasible = [&](size_t g) {
        for (size_t i = 0; i < g; i++) {
            size_t lo = i * k / g, hi = (i + 1) * k / g;
            size_t demand = hi - lo;
            size_t supply = pool.size() + (k - demand) * w;
            if (demand == 0 || supply < demand) return false;
        }
        return true;
    };
    while (groups <= k && !feasible(groups)) groups++;
    if (groups > k)
        throw std::invalid_argument("controlled_parallel_hermitian: not enough qubits to split");
    for (size_t i = 0; i < groups; i++) {
        size_t lo = i * k / groups, hi = (i + 1) * k / groups;
        std::vector<Placement> copies(placements.begin() + lo, placements.begin() + hi);
        std::vector<int> ancs = pool;
        for (size_t j = 0; j < k && ancs.size() < copies.size(); j++) {
            if (j >= lo && j < hi) continue;
            ancs.push_back(placements[j].q0);
            if (w == 2 && ancs.size() < copies.size()) ancs.push_back(placements[j].q1);
        }
        if (ancs.size() < copies.size())
            throw std::logic_error("controlled_parallel_hermitian: split bookkeeping failed");
        ancs.resize(copies.size());
        emit_toggle_phase(c, v, copies, ancs);
    }
    return c;
}

circuit::Circuit controlled_companion(const F2Poly& f) {
    int d = f.degree();
    if (d < 1 || !f.coeff(0))
        throw std::invalid_argument("controlled_companion: need f(0) = 1 and degree >= 1");
    Circuit c(1 + d);
    if (d == 1) return c;  // f = x+1, the 1x1 identity block
    // controlled cyclic shift: SWAP chain from the high end, middle CNOT of
    // each SWAP promoted to a Toffoli
    for (int j = d - 2; j >= 0; j--) {
        int a = 1 + j, b = 1 + j + 1;
        c.cnot(a, b);
        c.ccx(0, b, a);
        c.cnot(a, b);
    }
    // coefficient fan out of the corner, single promoted middle CNOT
    std::vector<int> fan;
    for (int j = 1; j < d; j++)
        if (f.coeff(j)) fan.push_back(j);
    if (!fan.empty()) {
        int k = fan[0];
        for (size_t i = 1; i < fan.size(); i++) c.cnot(1 + k, 1 + fan[i]);
        c.ccx(0, 1, 1 + k);
        for (size_t i = 1; i < fan.size(); i++) c.cnot(1 + k, 1 + fan[i]);
    }
    return c;
}

namespace {

BitMatrix pascal_matrix(int d) {
    BitMatrix m(d, d);
    for (int i = 0; i < d; i++)
        for (int j = i; j < d; j++)
            if ((i & j) == i) m.set(i, j, true);  // C(j,i) mod 2 by Lucas
    return m;
}

std::vector<int> shift_map(int n, int off) {
    std::vector<int> map(n);
    for (int i = 0; i < n; i++) map[i] = i + off;
    return map;
}

}  // namespace

circuit::Circuit controlled_unipotent(int d) {
    if (d < 1) throw std::invalid_argument("controlled_unipotent: degree >= 1 required");
    Circuit c(1 + d);
    if (d == 1) return c;
    Circuit basis = circuit::synth_cnot_from_matrix(pascal_matrix(d));
    c.append_mapped(basis, shift_map(d, 1));
    for (int j = d - 1; j >= 1; j--) c.ccx(0, j, j + 1);  // promoted bidiagonal ladder
    c.append_mapped(basis, shift_map(d, 1));
    return c;
}

circuit::Circuit controlled_cyclic_shift(int n, const std::vector<int>& borrowed) {
    if (n < 2) throw std::invalid_argument("controlled_cyclic_shift: n >= 2 required");
    int total = 1 + n + (int)borrowed.size();
    for (int b : borrowed)
        if (b <= n) throw std::invalid_argument("controlled_cyclic_shift: borrowed wires trail the targets");
    Circuit c(total);
    if (n == 2 && borrowed.empty()) {
        // no borrowable wire exists; fall back to the plain Fredkin form
        c.cnot(1, 2);
        c.ccx(0, 2, 1);
        c.cnot(1, 2);
        return c;
    }
    std::vector<Placement> r1, r2;
    for (int i = 0; 2 * i < n - 2; i++) r1.push_back({1 + i, 1 + (n - 2 - i)});
    for (int i = 0; 2 * i < n - 1; i++) r2.push_back({1 + i, 1 + (n - 1 - i)});
    if (!r1.empty()) c.append(controlled_parallel_hermitian(HermitianKind::SWAP, r1, borrowed, total));
    if (!r2.empty()) c.append(controlled_parallel_hermitian(HermitianKind::SWAP, r2, borrowed, total));
    return c;
}

namespace {

struct BlockInfo {
    int off;           // first component of the block
    int d;             // block dimension
    std::vector<int> fan;  // nonzero companion-column coefficients above the corner
};

ControlledSynthesisResult finish(Circuit&& c, Method m, jordan::JordanDecomposition&& j) {
    ControlledSynthesisResult res;
    res.circuit = std::move(c);
    res.method = m;
    res.jordan = std::move(j);
    res.report = circuit::resource_report(res.circuit, circuit::LoweringPolicy::ANCILLA_FREE);
    return res;
}

const F2Poly& xp1() {
    static const F2Poly p = F2Poly::parse("x+1");
    return p;
}

}  // namespace

ControlledSynthesisResult controlled_cnot_min_count(const BitMatrix& a) {
    auto j = jordan::generalized_jordan(a);
    int n = a.rows;
    Circuit c(1 + n);
    Circuit s_circ = circuit::synth_cnot_from_matrix(j.S);
    Circuit sinv_circ = circuit::synth_cnot_from_matrix(j.S_inv);
    c.append_mapped(s_circ, shift_map(n, 1));
    auto offs = j.block_offsets();
    for (size_t b = 0; b < j.blocks.size(); b++) {
        const auto& [q, k] = j.block_parts[b];
        const F2Poly& f = j.blocks[b];
        if (f == xp1()) continue;
        Circuit sub = (q == xp1()) ? controlled_unipotent(k) : controlled_companion(f);
        std::vector<int> map(sub.total_qubits());
        map[0] = 0;
        for (int t = 0; t < f.degree(); t++) map[1 + t] = 1 + offs[b] + t;
        c.append_mapped(sub, map);
    }
    c.append_mapped(sinv_circ, shift_map(n, 1));
    return finish(std::move(c), Method::COUNT_OPTIMAL, std::move(j));
}

ControlledSynthesisResult controlled_cnot_const_depth(const BitMatrix& a) {
    auto j = jordan::generalized_jordan(a);
    int n = a.rows;
    auto offs = j.block_offsets();
    std::vector<BlockInfo> parts;
    for (size_t b = 0; b < j.blocks.size(); b++) {
        const F2Poly& f = j.blocks[b];
        if (f == xp1()) continue;
        BlockInfo bi;
        bi.off = offs[b];
        bi.d = f.degree();
        for (int t = 1; t < bi.d; t++)
            if (f.coeff(t)) bi.fan.push_back(t);
        parts.push_back(bi);
    }
    if (parts.empty()) return finish(Circuit(1 + n), Method::CONST_DEPTH, std::move(j));

    Circuit c(1 + n);
    c.append_mapped(circuit::synth_cnot_from_matrix(j.S), shift_map(n, 1));

    // split blocks into two halves by cumulative size; while one half shifts,
    // the other half's wires are idle and get borrowed
    int total_d = 0;
    for (auto& p : parts) total_d += p.d;
    size_t split = 0;
    int cum = 0;
    while (split < parts.size() && 2 * cum < total_d) cum += parts[split++].d;
    auto emit_half = [&](size_t lo, size_t hi) {
        std::vector<Placement> r1, r2;
        for (size_t b = lo; b < hi; b++) {
            const auto& p = parts[b];
            for (int i = 0; 2 * i < p.d - 2; i++)
                r1.push_back({1 + p.off + i, 1 + p.off + (p.d - 2 - i)});
            for (int i = 0; 2 * i < p.d - 1; i++)
                r2.push_back({1 + p.off + i, 1 + p.off + (p.d - 1 - i)});
        }
        for (auto* r : {&r1, &r2}) {
            if (r->empty()) continue;
            if (r->size() == 1 && n == 2) {
                // nothing to borrow; direct Fredkin
                c.cnot((*r)[0].q0, (*r)[0].q1);
                c.ccx(0, (*r)[0].q1, (*r)[0].q0);
                c.cnot((*r)[0].q0, (*r)[0].q1);
            } else {
                c.append(controlled_parallel_hermitian(HermitianKind::SWAP, *r, {}, 1 + n));
            }
        }
    };
    emit_half(0, split);
    if (split < parts.size()) emit_half(split, parts.size());

    // all coefficient fans in one toggle-detected Toffoli region
    std::vector<Placement> fans;
    for (auto& p : parts) {
        if (p.fan.empty()) continue;
        int k = p.fan[0];
        for (size_t i = 1; i < p.fan.size(); i++)
            c.cnot(1 + p.off + k, 1 + p.off + p.fan[i]);
        fans.push_back({1 + p.off, 1 + p.off + k});
    }
    if (!fans.empty()) {
        if (fans.size() == 1 && n == 2) {
            c.ccx(0, fans[0].q0, fans[0].q1);
        } else {
            c.append(controlled_parallel_hermitian(HermitianKind::CNOT, fans, {}, 1 + n));
        }
    }
    for (auto& p : parts) {
        if (p.fan.empty()) continue;
        int k = p.fan[0];
        for (size_t i = 1; i < p.fan.size(); i++)
            c.cnot(1 + p.off + k, 1 + p.off + p.fan[i]);
    }

    c.append_mapped(circuit::synth_cnot_from_matrix(j.S_inv), shift_map(n, 1));
    return finish(std::move(c), Method::CONST_DEPTH, std::move(j));
}

namespace {

// Core of the depth-one construction for an invertible m (dimension nb) on
// data wires wire_of[0..nb); `rows` lists the nonzero rows of D = m + I.
void emit_depth1_core(Circuit& c, const BitMatrix& m, const std::vector<int>& wire_of,
                      const std::vector<int>& rows) {
    int nb = m.rows;
    int nr = (int)rows.size();
    BitMatrix d = m + BitMatrix::identity(nb);
    BitMatrix vmask = m + *gf2::inverse(m);

    int copy0 = c.total_qubits();
    for (int i = 0; i < nr; i++) c.add_ancilla();
    int nctrl = std::max(nr - 1, 0);
    int ctrlcopy0 = c.total_qubits();
    for (int i = 0; i < nctrl; i++) c.add_ancilla();

    // balanced fanout of the control into the control copies
    std::vector<int> ctrls{0};
    std::vector<std::pair<int, int>> tree;
    {
        int made = 0;
        while ((int)ctrls.size() < nr) {
            int have = (int)ctrls.size();
            for (int i = 0; i < have && (int)ctrls.size() < nr; i++) {
                int fresh = ctrlcopy0 + made++;
                tree.push_back({ctrls[i], fresh});
                ctrls.push_back(fresh);
            }
        }
    }
    for (auto& [src, dst] : tree) c.cnot(src, dst);

    // U_D: copy register picks up the measured rows of D x
    for (int i = 0; i < nr; i++)
        for (int k = 0; k < nb; k++)
            if (d.get(rows[i], k)) c.cnot(wire_of[k], copy0 + i);

    // single Toffoli layer, one per nonzero row of D
    for (int i = 0; i < nr; i++) c.ccx(ctrls[i], copy0 + i, wire_of[rows[i]]);

    // inverse fanout
    for (auto it = tree.rbegin(); it != tree.rend(); ++it) c.cnot(it->first, it->second);

    // measure the copy register in the X basis; Z and CZ masks u = D^T m,
    // v = (A + A^{-1})^T m realized bit by bit
    std::vector<int> mbits(nr);
    for (int i = 0; i < nr; i++) mbits[i] = c.measure_x(copy0 + i);
    for (int k = 0; k < nb; k++)
        for (int i = 0; i < nr; i++)
            if (d.get(rows[i], k)) c.classical_z(mbits[i], wire_of[k]);
    for (int k = 0; k < nb; k++)
        for (int i = 0; i < nr; i++)
            if (vmask.get(rows[i], k)) c.classical_cz(mbits[i], 0, wire_of[k]);
}

}  // namespace

ControlledSynthesisResult controlled_cnot_depth1(const BitMatrix& a) {
    auto j = jordan::generalized_jordan(a);
    int n = a.rows;
    auto offs = j.block_offsets();
    int c_prime = 0;
    std::vector<int> w;  // non-identity components, in J coordinates
    for (size_t b = 0; b < j.blocks.size(); b++) {
        if (j.blocks[b] == xp1()) {
            c_prime++;
            continue;
        }
        for (int t = 0; t < j.blocks[b].degree(); t++) w.push_back(offs[b] + t);
    }
    if (w.empty()) return finish(Circuit(1 + n), Method::DEPTH_ONE, std::move(j));

    // direct basis: Toffolis only for nonzero rows of A + I; stripping the
    // identity blocks guarantees n - c' of them, so take the cheaper basis
    BitMatrix d_direct = a + BitMatrix::identity(n);
    std::vector<int> direct_rows;
    for (int r = 0; r < n; r++)
        if (!d_direct.row(r).is_zero()) direct_rows.push_back(r);

    Circuit c(1 + n);
    if ((int)direct_rows.size() <= n - c_prime) {
        emit_depth1_core(c, a, shift_map(n, 1), direct_rows);
    } else {
        int nj = (int)w.size();
        BitMatrix jd = j.block_diagonal();
        BitMatrix jw(nj, nj);
        for (int r = 0; r < nj; r++)
            for (int cc = 0; cc < nj; cc++) jw.set(r, cc, jd.get(w[r], w[cc]));
        std::vector<int> wire_of(nj), rows(nj);
        for (int i = 0; i < nj; i++) {
            wire_of[i] = 1 + w[i];
            rows[i] = i;
        }
        c.append_mapped(circuit::synth_cnot_from_matrix(j.S), shift_map(n, 1));
        emit_depth1_core(c, jw, wire_of, rows);
        c.append_mapped(circuit::synth_cnot_from_matrix(j.S_inv), shift_map(n, 1));
    }
    return finish(std::move(c), Method::DEPTH_ONE, std::move(j));
}

circuit::Circuit controlled_reference(const BitMatrix& a) {
    Circuit base = circuit::synth_cnot_from_matrix(a);
    Circuit c(1 + a.rows);
    for (auto& g : base.gates) c.ccx(0, 1 + g.q[0], 1 + g.q[1]);
    return c;
}

}  // namespace ctrlsyn::synth_cnot
