#include "ctrlsyn/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctrlsyn/jordan.hpp"
#include "ctrlsyn/sim.hpp"
#include "ctrlsyn/synth_cnot.hpp"

namespace ctrlsyn::clifford {

using circuit::Circuit;
using circuit::Gate;
using circuit::GateKind;
using gf2::BitMatrix;
using gf2::BitVec;

Tableau Tableau::identity(int n) {
    Tableau t;
    t.n = n;
    t.xpart.assign(2 * n, BitVec(n));
    t.zpart.assign(2 * n, BitVec(n));
    t.phase.assign(2 * n, 0);
    for (int i = 0; i < n; i++) {
        t.xpart[i].set(i, true);
        t.zpart[n + i].set(i, true);
    }
    return t;
}

void Tableau::apply(GateKind k, int a, int b) {
    switch (k) {
        case GateKind::CNOT:
            for (int i = 0; i < 2 * n; i++) {
                bool xa = xpart[i].get(a), xb = xpart[i].get(b);
                bool za = zpart[i].get(a), zb = zpart[i].get(b);
                phase[i] ^= (xa && zb && (xb == za));
                xpart[i].set(b, xb ^ xa);
                zpart[i].set(a, za ^ zb);
            }
            break;
        case GateKind::H:
            for (int i = 0; i < 2 * n; i++) {
                bool x = xpart[i].get(a), z = zpart[i].get(a);
                phase[i] ^= (x && z);
                xpart[i].set(a, z);
                zpart[i].set(a, x);
            }
            break;
        case GateKind::S:
            for (int i = 0; i < 2 * n; i++) {
                bool x = xpart[i].get(a), z = zpart[i].get(a);
                phase[i] ^= (x && z);
                zpart[i].set(a, z ^ x);
            }
            break;
        case GateKind::Sdg:
            for (int i = 0; i < 2 * n; i++) {
                bool x = xpart[i].get(a), z = zpart[i].get(a);
                phase[i] ^= (x && !z);
                zpart[i].set(a, z ^ x);
            }
            break;
        case GateKind::X:
            for (int i = 0; i < 2 * n; i++) phase[i] ^= zpart[i].get(a);
            break;
        case GateKind::Z:
            for (int i = 0; i < 2 * n; i++) phase[i] ^= xpart[i].get(a);
            break;
        case GateKind::CZ:
            apply(GateKind::H, b);
            apply(GateKind::CNOT, a, b);
            apply(GateKind::H, b);
            break;
        case GateKind::SWAP:
            apply(GateKind::CNOT, a, b);
            apply(GateKind::CNOT, b, a);
            apply(GateKind::CNOT, a, b);
            break;
        default:
            throw std::invalid_argument("Tableau::apply: non-Clifford gate");
    }
}

Tableau Tableau::of_circuit(const Circuit& c) {
    if (c.n_ancilla != 0) throw std::invalid_argument("Tableau: ancillas not supported");
    Tableau t = identity(c.n_qubits);
    for (const Gate& g : c.gates) t.apply(g.kind, g.q[0], g.q[1]);
    return t;
}

bool Tableau::is_valid() const {
    auto pair = [&](int i, int j) {
        bool s = false;
        for (int q = 0; q < n; q++)
            s ^= (xpart[i].get(q) && zpart[j].get(q)) ^ (zpart[i].get(q) && xpart[j].get(q));
        return s;
    };
    for (int i = 0; i < 2 * n; i++)
        for (int j = i; j < 2 * n; j++) {
            bool want = (j == i + n) && (i < n);
            if (pair(i, j) != want) return false;
        }
    return true;
}

bool Tableau::operator==(const Tableau& o) const {
    return n == o.n && xpart == o.xpart && zpart == o.zpart && phase == o.phase;
}

gf2::BitMatrix Tableau::symplectic() const {
    BitMatrix m(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; i++)
        for (int q = 0; q < n; q++) {
            if (xpart[i].get(q)) m.set(i, q, true);
            if (zpart[i].get(q)) m.set(i, n + q, true);
        }
    return m;
}

namespace {

// ----- 2n x 2n layer symplectics (row-vector action, circuit order = left
// to right product) -----

BitMatrix sym_of_cnot_layer(const BitMatrix& parity) {
    int n = parity.rows;
    BitMatrix inv = *gf2::inverse(parity);
    BitMatrix m(2 * n, 2 * n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            if (parity.get(j, i)) m.set(i, j, true);       // top-left = parity^T
            if (inv.get(i, j)) m.set(n + i, n + j, true);  // bottom-right = parity^{-1}
        }
    return m;
}

BitMatrix sym_of_shear(const BitMatrix& b) {
    int n = b.rows;
    BitMatrix m = BitMatrix::identity(2 * n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
            if (b.get(i, j)) m.set(i, n + j, true);
    return m;
}

BitMatrix sym_of_h_subset(const std::vector<uint8_t>& s) {
    int n = (int)s.size();
    BitMatrix m(2 * n, 2 * n);
    for (int q = 0; q < n; q++) {
        if (s[q]) {
            m.set(q, n + q, true);
            m.set(n + q, q, true);
        } else {
            m.set(q, q, true);
            m.set(n + q, n + q, true);
        }
    }
    return m;
}

// any solution of A x = b over GF(2)
BitVec solve_system(const BitMatrix& a, const BitVec& b) {
    BitMatrix aug(a.rows, a.cols + 1);
    for (int i = 0; i < a.rows; i++) {
        for (int j = 0; j < a.cols; j++) aug.set(i, j, a.get(i, j));
        aug.set(i, a.cols, b.get(i));
    }
    auto elim = gf2::eliminate(aug);
    BitMatrix m = aug;
    for (auto [s, t] : elim.row_ops) m.row_xor(t, s);
    BitVec x(a.cols);
    for (int i = 0; i < a.rows; i++) {
        int piv = -1;
        for (int j = 0; j <= a.cols; j++)
            if (m.get(i, j)) {
                piv = j;
                break;
            }
        if (piv < 0) continue;
        if (piv == a.cols) throw std::logic_error("solve_system: inconsistent");
        x.set(piv, m.get(i, a.cols));
    }
    if (!(a.mul_vec(x) == b)) throw std::logic_error("solve_system: verification failed");
    return x;
}

// Symmetric B = diag(l1) + R^T diag(l2) R with R invertible: block pivoting
// into rank-one squares, hyperbolic pairs folded via
// ww^T + uv^T + vu^T = (w+u)(w+u)^T + (w+u+v)(w+u+v)^T + (w+v)(w+v)^T.
void sym_squares(const BitMatrix& b_in, std::vector<uint8_t>& l1, BitMatrix& r,
                 std::vector<uint8_t>& l2) {
    int n = b_in.rows;
    l1.assign(n, 0);
    BitMatrix b = b_in;
    // the diagonal goes straight into the first phase layer; the remaining
    // alternating part needs one diagonal seed to start the square pivots
    for (int q = 0; q < n; q++)
        if (b.get(q, q)) {
            l1[q] = 1;
            b.flip(q, q);
        }
    if (!b.is_zero()) {
        int q0 = 0;
        while (b.row(q0).is_zero()) q0++;
        l1[q0] ^= 1;
        b.flip(q0, q0);
    }
    std::vector<BitVec> squares;
    std::vector<std::pair<BitVec, BitVec>> pairs;
    auto rank1 = [&](const BitVec& u, const BitVec& v) {
        for (int i = 0; i < n; i++)
            if (u.get(i))
                for (int j = 0; j < n; j++)
                    if (v.get(j)) b.flip(i, j);
    };
    while (!b.is_zero()) {
        int q = -1;
        for (int i = 0; i < n; i++)
            if (b.get(i, i)) {
                q = i;
                break;
            }
        if (q >= 0) {
            BitVec w = b.col(q);
            squares.push_back(w);
            rank1(w, w);
            continue;
        }
        int p = -1, qq = -1;
        for (int i = 0; i < n && p < 0; i++)
            for (int j = i + 1; j < n; j++)
                if (b.get(i, j)) {
                    p = i;
                    qq = j;
                    break;
                }
        BitVec u = b.col(p), v = b.col(qq);
        pairs.push_back({u, v});
        rank1(u, v);
        rank1(v, u);
    }
    for (auto& [u, v] : pairs) {
        if (squares.empty()) throw std::logic_error("sym_squares: no square available for a pair");
        BitVec w = squares.back();
        squares.pop_back();
        BitVec wu = w, wuv = w, wv = w;
        wu.xor_with(u);
        wuv.xor_with(u);
        wuv.xor_with(v);
        wv.xor_with(v);
        squares.push_back(wu);
        squares.push_back(wuv);
        squares.push_back(wv);
    }
    // rows of R: the squares, completed to a basis by standard vectors
    r = BitMatrix(n, n);
    l2.assign(n, 0);
    int used = 0;
    {
        // track independence with a simple echelon
        std::vector<BitVec> ech;
        std::vector<int> piv;
        auto try_add = [&](const BitVec& v0) -> bool {
            BitVec v = v0;
            for (size_t i = 0; i < ech.size(); i++)
                if (v.get(piv[i])) v.xor_with(ech[i]);
            int p = -1;
            for (int bq = n - 1; bq >= 0; bq--)
                if (v.get(bq)) {
                    p = bq;
                    break;
                }
            if (p < 0) return false;
            ech.push_back(v);
            piv.push_back(p);
            return true;
        };
        for (auto& w : squares) {
            if (!try_add(w)) throw std::logic_error("sym_squares: dependent squares");
            r.set_row(used, w);
            l2[used] = 1;
            used++;
        }
        for (int q = 0; q < n && used < n; q++) {
            BitVec e(n);
            e.set(q, true);
            if (try_add(e)) r.set_row(used++, e);
        }
    }
    if (used != n) throw std::logic_error("sym_squares: completion failed");
    // verify the decomposition
    BitMatrix check(n, n);
    for (int i = 0; i < n; i++)
        if (l1[i]) check.set(i, i, true);
    for (int i = 0; i < n; i++) {
        if (!l2[i]) continue;
        BitVec w = r.row(i);
        for (int a = 0; a < n; a++)
            if (w.get(a))
                for (int bcol = 0; bcol < n; bcol++)
                    if (w.get(bcol)) check.flip(a, bcol);
    }
    if (!(check == b_in)) throw std::logic_error("sym_squares: decomposition check failed");
}

}  // namespace

circuit::Circuit LayeredClifford::to_circuit() const {
    Circuit c(n);
    auto emit_h = [&](const std::vector<uint8_t>& s) {
        for (int q = 0; q < n; q++)
            if (s[q]) c.h(q);
    };
    auto emit_c = [&](const BitMatrix& parity) {
        if (parity.rows == 0 || parity.is_identity()) return;
        c.append(circuit::synth_cnot_from_matrix(parity));
    };
    auto emit_p = [&](const std::vector<uint8_t>& e) {
        for (int q = 0; q < n; q++) {
            switch (e[q] & 3) {
                case 1: c.s(q); break;
                case 2: c.z(q); break;
                case 3: c.sdg(q); break;
                default: break;
            }
        }
    };
    emit_h(h1);
    emit_c(c1);
    emit_p(p1);
    emit_c(c2);
    emit_p(p2);
    emit_c(c3);
    emit_h(h2);
    emit_p(p3);
    emit_c(c4);
    emit_p(p4);
    emit_c(c5);
    for (int q = 0; q < n; q++)
        if (pauli_x[q]) c.x(q);
    for (int q = 0; q < n; q++)
        if (pauli_z[q]) c.z(q);
    return c;
}

LayeredClifford ag_normal_form(const Tableau& t) {
    if (!t.is_valid()) throw std::invalid_argument("ag_normal_form: invalid tableau");
    int n = t.n;
    BitMatrix m = t.symplectic();
    // blocks
    BitMatrix g(n, n), k(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            g.set(i, j, m.get(n + i, j));
            k.set(i, j, m.get(n + i, n + j));
        }

    // rows of A: off-S rows span the left kernel of G, S rows complete them
    auto lnull = gf2::eliminate(g.transpose()).nullspace_basis;
    int r = n - (int)lnull.size();
    BitMatrix a(n, n);
    {
        std::vector<BitVec> ech;
        std::vector<int> piv;
        auto try_add = [&](const BitVec& v0) -> bool {
            BitVec v = v0;
            for (size_t i = 0; i < ech.size(); i++)
                if (v.get(piv[i])) v.xor_with(ech[i]);
            int p = -1;
            for (int bq = n - 1; bq >= 0; bq--)
                if (v.get(bq)) {
                    p = bq;
                    break;
                }
            if (p < 0) return false;
            ech.push_back(v);
            piv.push_back(p);
            return true;
        };
        for (int i = 0; i < (int)lnull.size(); i++) {
            if (!try_add(lnull[i])) throw std::logic_error("ag_normal_form: kernel basis");
            a.set_row(r + i, lnull[i]);
        }
        int row = 0;
        for (int q = 0; q < n && row < r; q++) {
            BitVec e(n);
            e.set(q, true);
            if (try_add(e)) a.set_row(row++, e);
        }
        if (row != r) throw std::logic_error("ag_normal_form: completion failed");
    }

    // columns of A': on S from A*G, off S solving (A*K) u-rows
    BitMatrix ag = gf2::mat_mul(a, g);
    BitMatrix ak = gf2::mat_mul(a, k);
    BitMatrix aprime(n, n);
    for (int q = 0; q < r; q++) {
        BitVec w = ag.row(q);
        for (int i = 0; i < n; i++) aprime.set(i, q, w.get(i));
    }
    if (r < n) {
        BitMatrix p(n - r, n);
        for (int i = 0; i < n - r; i++) p.set_row(i, ak.row(r + i));
        for (int c = r; c < n; c++) {
            BitVec rhs(n - r);
            rhs.set(c - r, true);
            BitVec y = solve_system(p, rhs);
            for (int i = 0; i < n; i++) aprime.set(i, c, y.get(i));
        }
    }
    auto a_inv = gf2::inverse(a);
    auto aprime_inv = gf2::inverse(aprime);
    if (!a_inv || !aprime_inv) throw std::logic_error("ag_normal_form: singular layer matrix");

    std::vector<uint8_t> subset(n, 0);
    for (int q = 0; q < r; q++) subset[q] = 1;
    BitMatrix mprime =
        gf2::mat_mul(gf2::mat_mul(sym_of_cnot_layer(*a_inv), m), sym_of_cnot_layer(*aprime_inv));

    // check bottom-left == D and read B2 off the bottom-right block
    BitMatrix b2(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            bool want = (i == j && i < r);
            if (mprime.get(n + i, j) != want)
                throw std::logic_error("ag_normal_form: rank normalization failed");
        }
    for (int q = 0; q < r; q++)
        for (int j = 0; j < n; j++) {
            bool nv = mprime.get(n + q, n + j) ^ (q == j) ^ (q == j && q < r);
            // N = K' + I + D restricted to S rows
            b2.set(q, j, nv);
        }
    for (int q = r; q < n; q++)
        for (int j = 0; j < n; j++) {
            bool nv = mprime.get(n + q, n + j) ^ (q == j);
            if (nv) throw std::logic_error("ag_normal_form: off-subset K rows not identity");
        }
    for (int i = 0; i < n; i++)
        for (int j = 0; j < i; j++) {
            if (i < r && j < r && b2.get(i, j) != b2.get(j, i))
                throw std::logic_error("ag_normal_form: B2 not symmetric");
            if (i >= r && j < r) b2.set(i, j, b2.get(j, i));
            if (i >= r && j >= r) b2.set(i, j, false);
        }
    for (int i = r; i < n; i++) b2.set(i, i, false);

    BitMatrix mpp = gf2::mat_mul(mprime, sym_of_shear(b2));
    // target shape is shear(B1) * omega = [[(I-D)+B1 D, D+B1(I-D)], [D, I-D]]:
    // B1's subset columns live in the top-left block, its off-subset columns
    // in the top-right block
    BitMatrix b1(n, n);
    for (int i = 0; i < n; i++)
        for (int q = 0; q < n; q++) {
            bool e = mpp.get(i, q);
            bool f = mpp.get(i, n + q);
            if (q < r) {
                b1.set(i, q, e);
                if (f != (i == q))
                    throw std::logic_error("ag_normal_form: subset F columns not identity");
            } else {
                b1.set(i, q, f);
                if (e != (i == q))
                    throw std::logic_error("ag_normal_form: off-subset E columns not identity");
            }
        }
    for (int i = 0; i < n; i++)
        for (int j = 0; j < i; j++)
            if (b1.get(i, j) != b1.get(j, i))
                throw std::logic_error("ag_normal_form: B1 not symmetric");

    // verify shear(B1) * M'' == omega
    BitMatrix omega = sym_of_h_subset(subset);
    if (!(gf2::mat_mul(sym_of_shear(b1), mpp) == omega))
        throw std::logic_error("ag_normal_form: Bruhat reduction failed");

    LayeredClifford L;
    L.n = n;
    L.h1.assign(n, 0);
    L.h2 = subset;
    L.c1 = a;
    sym_squares(b1, L.p1, L.c2, L.p2);
    L.c3 = *gf2::inverse(L.c2);
    sym_squares(b2, L.p3, L.c4, L.p4);
    L.c5 = gf2::mat_mul(aprime, *gf2::inverse(L.c4));
    L.pauli_x.assign(n, 0);
    L.pauli_z.assign(n, 0);

    // solve for the trailing Pauli from the phase residues
    Tableau tl = Tableau::of_circuit(L.to_circuit());
    if (!(tl.symplectic() == m)) throw std::logic_error("ag_normal_form: symplectic mismatch");
    BitMatrix sys(2 * n, 2 * n);
    BitVec rhs(2 * n);
    for (int i = 0; i < 2 * n; i++) {
        for (int q = 0; q < n; q++) {
            sys.set(i, q, tl.zpart[i].get(q));      // u (X part of W)
            sys.set(i, n + q, tl.xpart[i].get(q));  // v (Z part of W)
        }
        rhs.set(i, (t.phase[i] ^ tl.phase[i]) != 0);
    }
    BitVec w = solve_system(sys, rhs);
    for (int q = 0; q < n; q++) {
        L.pauli_x[q] = w.get(q);
        L.pauli_z[q] = w.get(n + q);
    }

    if (!(Tableau::of_circuit(L.to_circuit()) == t))
        throw std::logic_error("ag_normal_form: recomposition failed");
    return L;
}

namespace {

// T^k on a wire, k mod 8, as S-power plus at most one T
void emit_t_power(Circuit& c, int wire, int k) {
    k &= 7;
    switch (k >> 1) {
        case 1: c.s(wire); break;
        case 2: c.z(wire); break;
        case 3: c.sdg(wire); break;
        default: break;
    }
    if (k & 1) c.t(wire);
}

}  // namespace

circuit::Circuit controlled_h(int t, int total_wires) {
    Circuit c(total_wires);
    // c(H) = (I (x) W^dag) CNOT (I (x) W) with W = S H T H S^dag
    c.sdg(t);
    c.h(t);
    c.t(t);
    c.h(t);
    c.s(t);
    c.cnot(0, t);
    c.sdg(t);
    c.h(t);
    c.tdg(t);
    c.h(t);
    c.s(t);
    return c;
}

circuit::Circuit controlled_s_layer(const std::vector<std::pair<int, int>>& exponents,
                                    SLayerMode mode, int total_wires, int extra_control_phase) {
    (void)mode;  // both modes share the exact ancilla-free gadget
    Circuit c(total_wires);
    int control_exp = extra_control_phase & 7;
    std::vector<std::pair<int, int>> odd;
    for (auto& [w, e0] : exponents) {
        int e = ((e0 % 4) + 4) % 4;
        if (w <= 0 || w >= total_wires) throw std::invalid_argument("controlled_s_layer: bad wire");
        if (e == 0) continue;
        if (e == 2) {
            c.cz(0, w);
            continue;
        }
        odd.push_back({w, e});
        control_exp = (control_exp + e) & 7;
    }
    for (auto& [w, e] : odd) emit_t_power(c, w, e);
    emit_t_power(c, 0, control_exp);
    for (auto& [w, e] : odd) c.cnot(0, w);
    for (auto& [w, e] : odd) emit_t_power(c, w, (8 - e) & 7);
    for (auto& [w, e] : odd) c.cnot(0, w);
    return c;
}

namespace {

// CS(x, y) = e^{i pi/2 xy} exactly, and its inverse
void emit_cs(Circuit& c, int x, int y, bool dagger) {
    if (!dagger) {
        c.t(x);
        c.t(y);
        c.cnot(x, y);
        c.tdg(y);
        c.cnot(x, y);
    } else {
        c.tdg(x);
        c.tdg(y);
        c.cnot(x, y);
        c.t(y);
        c.cnot(x, y);
    }
}

// exact c(T^{+-1})(0, t) using three borrowed wires g, h, s
void emit_ct_borrowed(Circuit& c, int t, int g, int h, int s, bool dagger) {
    // e^{+- i pi/4 a t (1-2g)} by compute-rotate-uncompute
    c.ccx(0, t, g);
    if (!dagger)
        c.t(g);
    else
        c.tdg(g);
    c.ccx(0, t, g);
    if (!dagger)
        c.tdg(g);
    else
        c.t(g);
    // CCS^{+-1}(0, t, g) via h: e^{+- i pi/2 a (tg) (1-2h)} ...
    c.ccx(t, g, h);
    emit_cs(c, 0, h, dagger);
    c.ccx(t, g, h);
    emit_cs(c, 0, h, !dagger);
    // ... and the CCCZ(0, t, g, h) residue via s, exact at the Z level
    c.ccx(0, t, s);
    c.ccz(s, g, h);
    c.ccx(0, t, s);
    c.ccz(s, g, h);
}

}  // namespace

circuit::Circuit controlled_t_layer(const std::vector<std::pair<int, int>>& exponents,
                                    TLayerMode mode, int total_wires) {
    Circuit c(total_wires);
    if (exponents.empty()) return c;
    for (auto& [w, e] : exponents) {
        if (w <= 0 || w >= total_wires) throw std::invalid_argument("controlled_t_layer: bad wire");
        if (e != 1 && e != -1) throw std::invalid_argument("controlled_t_layer: exponent must be +-1");
    }
    int k = (int)exponents.size();
    if (mode == TLayerMode::CLEAN_ANCILLA) {
        // control copies so the per-target gadgets parallelize
        std::vector<int> ctrls{0};
        std::vector<std::pair<int, int>> tree;
        for (int i = 1; i < k; i++) {
            int fresh = c.add_ancilla();
            tree.push_back({ctrls[(i - 1) % ctrls.size()], fresh});
            ctrls.push_back(fresh);
        }
        for (auto& [src, dst] : tree) c.cnot(src, dst);
        for (int i = 0; i < k; i++) {
            auto [w, e] = exponents[i];
            int g = c.add_ancilla();
            int hh = c.add_ancilla();
            circuit::emit_and_gadget(c, ctrls[i], w, g, hh);
            emit_t_power(c, g, e > 0 ? 1 : 7);
            int m = c.measure_x(g);
            c.classical_cz(m, ctrls[i], w);
        }
        for (auto it = tree.rbegin(); it != tree.rend(); ++it) c.cnot(it->first, it->second);
        return c;
    }
    // BORROWED: three borrowed wires per gadget, targets run sequentially and
    // lend their wires to each other
    for (auto& [w, e] : exponents) {
        std::vector<int> borrow;
        for (int q = 1; q < total_wires && (int)borrow.size() < 3; q++)
            if (q != w) borrow.push_back(q);
        if (borrow.size() < 3)
            throw std::invalid_argument("controlled_t_layer: no borrowable qubit available");
        emit_ct_borrowed(c, w, borrow[0], borrow[1], borrow[2], e < 0);
    }
    return c;
}

namespace {

Circuit pad_circuit(const Circuit& c, int n) {
    Circuit out(n);
    std::vector<int> map(c.total_qubits());
    for (size_t i = 0; i < map.size(); i++) map[i] = (int)i;
    out.append_mapped(c, map);
    return out;
}

// global phase of `target` relative to `model` (both measurement-free,
// equal up to phase); returned as an exact eighth turn
int relative_eighth_turn(const Circuit& target, const Circuit& model) {
    int q = target.total_qubits();
    sim::SparseState a = sim::SparseState::basis(q, 0);
    sim::SparseState b = sim::SparseState::basis(q, 0);
    std::vector<uint8_t> nobits;
    for (auto& g : target.gates) sim::apply_gate(a, g, nobits);
    for (auto& g : model.gates) sim::apply_gate(b, g, nobits);
    for (auto& [key, amp] : a.amps) {
        if (std::abs(amp) < 1e-9) continue;
        auto it = b.amps.find(key);
        if (it == b.amps.end() || std::abs(it->second) < 1e-9)
            throw std::logic_error("relative_eighth_turn: states differ");
        double ang = std::arg(amp / it->second);
        int k = (int)std::llround(ang / (std::numbers::pi / 4));
        k = ((k % 8) + 8) % 8;
        double err = std::abs(std::arg(amp / it->second * std::polar(1.0, -k * std::numbers::pi / 4)));
        if (err > 1e-9) throw std::logic_error("relative_eighth_turn: phase not an eighth turn");
        return k;
    }
    throw std::logic_error("relative_eighth_turn: zero state");
}

void append_with_fresh_ancillas(Circuit& out, const Circuit& sub) {
    std::vector<int> map(sub.total_qubits());
    for (int i = 0; i < sub.n_qubits; i++) map[i] = i;
    for (int i = sub.n_qubits; i < sub.total_qubits(); i++) map[i] = out.add_ancilla();
    out.append_mapped(sub, map);
}

circuit::LoweringPolicy lowering_of(AncillaPolicy p) {
    return p == AncillaPolicy::FREE ? circuit::LoweringPolicy::ANCILLA_FREE
                                    : circuit::LoweringPolicy::MEASURE_ASSISTED;
}

}  // namespace

ControlledCliffordResult controlled_clifford(const Circuit& c_in, AncillaPolicy policy) {
    int n0 = c_in.n_qubits;
    int n = std::max(n0, 3);
    Circuit c = pad_circuit(c_in, n);
    Tableau tab = Tableau::of_circuit(c);
    LayeredClifford L = ag_normal_form(tab);
    int eighth = relative_eighth_turn(c, L.to_circuit());

    Circuit out(1 + n);
    bool phase_folded = false;
    auto emit_h_layer = [&](const std::vector<uint8_t>& s) {
        for (int q = 0; q < n; q++)
            if (s[q]) out.append(controlled_h(1 + q, 1 + n));
    };
    auto emit_c_layer = [&](const BitMatrix& parity) {
        if (parity.rows == 0 || parity.is_identity()) return;
        auto sub = policy == AncillaPolicy::FREE ? synth_cnot::controlled_cnot_const_depth(parity)
                                                 : synth_cnot::controlled_cnot_depth1(parity);
        append_with_fresh_ancillas(out, sub.circuit);
    };
    auto emit_p_layer = [&](const std::vector<uint8_t>& e) {
        std::vector<std::pair<int, int>> exps;
        for (int q = 0; q < n; q++)
            if (e[q] & 3) exps.push_back({1 + q, e[q] & 3});
        if (exps.empty() && (phase_folded || eighth == 0)) return;
        int extra = phase_folded ? 0 : eighth;
        phase_folded = true;
        out.append(controlled_s_layer(exps, policy == AncillaPolicy::FREE
                                                ? SLayerMode::ANCILLA_FREE
                                                : SLayerMode::CLEAN_ANCILLA,
                                      1 + n, extra));
    };
    emit_h_layer(L.h1);
    emit_c_layer(L.c1);
    emit_p_layer(L.p1);
    emit_c_layer(L.c2);
    emit_p_layer(L.p2);
    emit_c_layer(L.c3);
    emit_h_layer(L.h2);
    emit_p_layer(L.p3);
    emit_c_layer(L.c4);
    emit_p_layer(L.p4);
    emit_c_layer(L.c5);
    for (int q = 0; q < n; q++)
        if (L.pauli_x[q]) out.cnot(0, 1 + q);
    for (int q = 0; q < n; q++)
        if (L.pauli_z[q]) out.cz(0, 1 + q);
    if (!phase_folded) emit_t_power(out, 0, eighth);

    ControlledCliffordResult res;
    res.policy = policy;
    res.padded_qubits = n - n0;
    res.report = circuit::resource_report(out, lowering_of(policy));
    res.circuit = std::move(out);
    return res;
}

ControlledCliffordResult controlled_clifford_t(const Circuit& c_in, AncillaPolicy policy) {
    for (auto& g : c_in.gates)
        if (g.kind == GateKind::TOFFOLI || g.kind == GateKind::CCZ ||
            g.kind == GateKind::MEASURE_X || g.kind == GateKind::CLASSICAL_Z ||
            g.kind == GateKind::CLASSICAL_CZ)
            throw std::invalid_argument("controlled_clifford_t: unsupported gate kind");
    int n0 = c_in.n_qubits;
    int n = std::max(n0, 4);
    Circuit c = pad_circuit(c_in, n);

    // split into C_D T^{k_D} ... C_1 T^{k_1} C_0; Cliffords that slide past
    // an open T layer stay pending until the layer closes
    std::vector<std::vector<Gate>> cliffs(1);
    std::vector<std::vector<std::pair<int, int>>> tlayers;
    std::vector<Gate> pending;
    std::vector<std::pair<int, int>> open;
    std::vector<uint8_t> open_used(n, 0), pending_used(n, 0);
    auto close_layer = [&]() {
        if (open.empty()) return;
        tlayers.push_back(open);
        cliffs.push_back(pending);
        pending.clear();
        open.clear();
        std::fill(open_used.begin(), open_used.end(), 0);
        std::fill(pending_used.begin(), pending_used.end(), 0);
    };
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::T || g.kind == GateKind::Tdg) {
            int q = g.q[0];
            int e = g.kind == GateKind::T ? 1 : -1;
            if (!open.empty() && !open_used[q] && !pending_used[q]) {
                open.push_back({q, e});
                open_used[q] = 1;
            } else {
                close_layer();
                open.push_back({q, e});
                open_used[q] = 1;
            }
        } else {
            if (open.empty()) {
                cliffs.back().push_back(g);
            } else {
                pending.push_back(g);
                for (int i = 0; i < circuit::gate_arity(g.kind); i++) pending_used[g.q[i]] = 1;
            }
        }
    }
    close_layer();

    Circuit out(1 + n);
    auto emit_cliff = [&](const std::vector<Gate>& gs) {
        for (const Gate& g : gs) {
            Gate m = g;
            for (int i = 0; i < circuit::gate_arity(g.kind); i++) m.q[i] = 1 + g.q[i];
            out.gates.push_back(m);
        }
    };
    for (size_t i = 0; i < cliffs.size(); i++) {
        emit_cliff(cliffs[i]);
        if (i < tlayers.size()) {
            std::vector<std::pair<int, int>> mapped;
            for (auto& [q, e] : tlayers[i]) mapped.push_back({1 + q, e});
            append_with_fresh_ancillas(
                out, controlled_t_layer(mapped,
                                        policy == AncillaPolicy::FREE ? TLayerMode::BORROWED
                                                                      : TLayerMode::CLEAN_ANCILLA,
                                        1 + n));
        }
    }

    // anti-controlled inverse of the composed Clifford
    Circuit vdag(n);
    {
        std::vector<Gate> all;
        for (auto& seg : cliffs) all.insert(all.end(), seg.begin(), seg.end());
        for (auto it = all.rbegin(); it != all.rend(); ++it) {
            Gate g = *it;
            if (g.kind == GateKind::S)
                g.kind = GateKind::Sdg;
            else if (g.kind == GateKind::Sdg)
                g.kind = GateKind::S;
            vdag.gates.push_back(g);
        }
    }
    out.x(0);
    auto cv = controlled_clifford(vdag, policy);
    append_with_fresh_ancillas(out, cv.circuit);
    out.x(0);

    ControlledCliffordResult res;
    res.policy = policy;
    res.padded_qubits = n - n0;
    res.report = circuit::resource_report(out, lowering_of(policy));
    res.circuit = std::move(out);
    return res;
}

}  // namespace ctrlsyn::clifford
