#include "ctrlsyn/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ctrlsyn::circuit {

int gate_arity(GateKind k) {
    switch (k) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::S:
        case GateKind::Sdg:
        case GateKind::T:
        case GateKind::Tdg:
        case GateKind::MEASURE_X:
        case GateKind::CLASSICAL_Z:
            return 1;
        case GateKind::CNOT:
        case GateKind::CZ:
        case GateKind::SWAP:
        case GateKind::CLASSICAL_CZ:
            return 2;
        case GateKind::TOFFOLI:
        case GateKind::CCZ:
            return 3;
    }
    return 0;
}

bool is_clifford(GateKind k) {
    switch (k) {
        case GateKind::T:
        case GateKind::Tdg:
        case GateKind::TOFFOLI:
        case GateKind::CCZ:
        case GateKind::MEASURE_X:
            return false;
        default:
            return true;
    }
}

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::T: return "t";
        case GateKind::Tdg: return "tdg";
        case GateKind::CNOT: return "cnot";
        case GateKind::CZ: return "cz";
        case GateKind::SWAP: return "swap";
        case GateKind::TOFFOLI: return "ccx";
        case GateKind::CCZ: return "ccz";
        case GateKind::MEASURE_X: return "mx";
        case GateKind::CLASSICAL_Z: return "z?";
        case GateKind::CLASSICAL_CZ: return "cz?";
    }
    return "?";
}

void Circuit::add(GateKind k, int a, int b, int c) {
    Gate g;
    g.kind = k;
    g.q = {a, b, c};
    int ar = gate_arity(k);
    for (int i = 0; i < ar; i++) {
        if (g.q[i] < 0 || g.q[i] >= total_qubits())
            throw std::invalid_argument("gate operand out of range");
        for (int j = 0; j < i; j++)
            if (g.q[i] == g.q[j]) throw std::invalid_argument("gate operands must be distinct");
    }
    gates.push_back(g);
}

int Circuit::measure_x(int q) {
    if (q < n_qubits || q >= total_qubits())
        throw std::invalid_argument("measure_x: measurements only on ancilla qubits");
    Gate g;
    g.kind = GateKind::MEASURE_X;
    g.q = {q, -1, -1};
    g.bit = n_bits++;
    gates.push_back(g);
    return g.bit;
}

void Circuit::classical_z(int bit, int q) {
    if (bit < 0 || bit >= n_bits) throw std::invalid_argument("classical_z: unknown bit");
    add(GateKind::CLASSICAL_Z, q);
    gates.back().bit = bit;
}

void Circuit::classical_cz(int bit, int a, int b) {
    if (bit < 0 || bit >= n_bits) throw std::invalid_argument("classical_cz: unknown bit");
    add(GateKind::CLASSICAL_CZ, a, b);
    gates.back().bit = bit;
}

void Circuit::append_mapped(const Circuit& other, const std::vector<int>& wire_map) {
    if ((int)wire_map.size() != other.total_qubits())
        throw std::invalid_argument("append_mapped: wire map size mismatch");
    int bit_off = n_bits;
    n_bits += other.n_bits;
    for (const Gate& g : other.gates) {
        Gate m = g;
        for (int i = 0; i < gate_arity(g.kind); i++) {
            m.q[i] = wire_map[g.q[i]];
            if (m.q[i] < 0 || m.q[i] >= total_qubits())
                throw std::invalid_argument("append_mapped: wire out of range");
        }
        if (g.bit >= 0) m.bit = g.bit + bit_off;
        gates.push_back(m);
    }
}

void Circuit::append(const Circuit& other) {
    std::vector<int> id(other.total_qubits());
    for (size_t i = 0; i < id.size(); i++) id[i] = (int)i;
    append_mapped(other, id);
}

bool Circuit::has_measurement() const {
    for (const Gate& g : gates)
        if (g.kind == GateKind::MEASURE_X) return true;
    return false;
}

std::string Circuit::to_text() const {
    std::ostringstream os;
    os << "qubits " << n_qubits << " ancilla " << n_ancilla << "\n";
    for (const Gate& g : gates) {
        switch (g.kind) {
            case GateKind::MEASURE_X:
                os << "mx " << g.q[0] << " -> m" << g.bit << "\n";
                break;
            case GateKind::CLASSICAL_Z:
                os << "z? m" << g.bit << " " << g.q[0] << "\n";
                break;
            case GateKind::CLASSICAL_CZ:
                os << "cz? m" << g.bit << " " << g.q[0] << " " << g.q[1] << "\n";
                break;
            default: {
                os << gate_name(g.kind);
                for (int i = 0; i < gate_arity(g.kind); i++) os << " " << g.q[i];
                os << "\n";
            }
        }
    }
    return os.str();
}

namespace {

int parse_bit_token(const std::string& tok) {
    if (tok.size() < 2 || tok[0] != 'm') throw std::invalid_argument("circuit: bad bit token '" + tok + "'");
    return std::stoi(tok.substr(1));
}

}  // namespace

Circuit Circuit::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    Circuit c;
    bool have_header = false;
    int max_bit = -1;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (!have_header) {
            if (tok != "qubits") throw std::invalid_argument("circuit: expected 'qubits' header");
            if (!(ls >> c.n_qubits)) throw std::invalid_argument("circuit: bad qubit count");
            std::string anc;
            if (ls >> anc) {
                if (anc != "ancilla" || !(ls >> c.n_ancilla))
                    throw std::invalid_argument("circuit: bad ancilla clause");
            }
            if (c.n_qubits < 0 || c.n_ancilla < 0 || c.total_qubits() == 0)
                throw std::invalid_argument("circuit: bad header counts");
            have_header = true;
            continue;
        }
        if (tok == "mx") {
            int q;
            std::string arrow, bit;
            if (!(ls >> q >> arrow >> bit) || arrow != "->")
                throw std::invalid_argument("circuit: bad mx line");
            int b = parse_bit_token(bit);
            if (q < c.n_qubits || q >= c.total_qubits())
                throw std::invalid_argument("circuit: measurements only on ancilla qubits");
            Gate g;
            g.kind = GateKind::MEASURE_X;
            g.q = {q, -1, -1};
            g.bit = b;
            max_bit = std::max(max_bit, b);
            c.n_bits = max_bit + 1;
            c.gates.push_back(g);
            continue;
        }
        if (tok == "z?" || tok == "cz?") {
            std::string bit;
            if (!(ls >> bit)) throw std::invalid_argument("circuit: bad conditional line");
            int b = parse_bit_token(bit);
            if (b > max_bit) throw std::invalid_argument("circuit: condition bit not yet measured");
            if (tok == "z?") {
                int q;
                if (!(ls >> q)) throw std::invalid_argument("circuit: bad z? line");
                c.classical_z(b, q);
            } else {
                int a, bq;
                if (!(ls >> a >> bq)) throw std::invalid_argument("circuit: bad cz? line");
                c.classical_cz(b, a, bq);
            }
            continue;
        }
        GateKind k;
        if (tok == "x") k = GateKind::X;
        else if (tok == "z") k = GateKind::Z;
        else if (tok == "h") k = GateKind::H;
        else if (tok == "s") k = GateKind::S;
        else if (tok == "sdg") k = GateKind::Sdg;
        else if (tok == "t") k = GateKind::T;
        else if (tok == "tdg") k = GateKind::Tdg;
        else if (tok == "cnot") k = GateKind::CNOT;
        else if (tok == "cz") k = GateKind::CZ;
        else if (tok == "swap") k = GateKind::SWAP;
        else if (tok == "ccx") k = GateKind::TOFFOLI;
        else if (tok == "ccz") k = GateKind::CCZ;
        else throw std::invalid_argument("circuit: unknown gate '" + tok + "'");
        int ar = gate_arity(k);
        int q[3] = {-1, -1, -1};
        for (int i = 0; i < ar; i++)
            if (!(ls >> q[i])) throw std::invalid_argument("circuit: too few operands for " + tok);
        std::string extra;
        if (ls >> extra) throw std::invalid_argument("circuit: trailing tokens");
        c.add(k, q[0], q[1], q[2]);
    }
    if (!have_header) throw std::invalid_argument("circuit: missing header");
    return c;
}

gf2::BitMatrix parity_matrix(const Circuit& c) {
    if (c.n_ancilla != 0) throw std::invalid_argument("parity_matrix: ancillas not allowed");
    gf2::BitMatrix a = gf2::BitMatrix::identity(c.n_qubits);
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::CNOT:
                a.row_xor(g.q[1], g.q[0]);
                break;
            case GateKind::SWAP:
                a.row_xor(g.q[1], g.q[0]);
                a.row_xor(g.q[0], g.q[1]);
                a.row_xor(g.q[1], g.q[0]);
                break;
            default:
                throw std::invalid_argument("parity_matrix: non-CNOT gate present");
        }
    }
    return a;
}

Circuit synth_cnot_from_matrix(const gf2::BitMatrix& a) {
    if (a.rows != a.cols) throw std::invalid_argument("synth_cnot_from_matrix: square matrix required");
    auto elim = gf2::eliminate(a);
    if (!elim.inverse) throw std::invalid_argument("synth_cnot_from_matrix: singular matrix");
    Circuit c(a.rows);
    for (auto it = elim.row_ops.rbegin(); it != elim.row_ops.rend(); ++it)
        c.cnot(it->first, it->second);
    return c;
}

namespace {

// 7-T CCZ phase network, T-depth 3, no ancillas.
void emit_ccz_7t(Circuit& out, int a, int b, int c) {
    out.t(a);
    out.t(b);
    out.t(c);
    out.cnot(a, b);   // b: a^b
    out.cnot(b, c);   // c: a^b^c
    out.cnot(c, a);   // a: b^c
    out.tdg(a);
    out.tdg(b);
    out.t(c);
    out.cnot(b, a);   // a: a^c
    out.tdg(a);
    out.cnot(b, c);   // c: c
    out.cnot(c, a);   // a: a
    out.cnot(a, b);   // b: b
}

}  // namespace

// Computes |ab> into the fresh ancilla g with 4 T gates in one T layer,
// using scratch ancilla hh; exact, no measurement.
void emit_and_gadget(Circuit& out, int a, int b, int g, int hh) {
    out.cnot(a, hh);
    out.cnot(b, hh);  // hh: a^b
    out.h(g);
    out.cnot(g, a);
    out.cnot(g, b);
    out.cnot(g, hh);
    out.t(g);
    out.tdg(a);
    out.tdg(b);
    out.t(hh);
    out.cnot(g, a);
    out.cnot(g, b);
    out.cnot(g, hh);
    out.cnot(a, hh);
    out.cnot(b, hh);  // hh: 0
    out.h(g);
    out.s(g);         // g: |ab> exactly
}

Circuit lower_toffoli(const Circuit& c, LoweringPolicy policy) {
    Circuit out(c.n_qubits, c.n_ancilla);
    out.n_bits = 0;
    std::vector<int> bit_map(c.n_bits, -1);
    for (const Gate& g : c.gates) {
        if (g.kind != GateKind::TOFFOLI && g.kind != GateKind::CCZ) {
            Gate m = g;
            if (g.kind == GateKind::MEASURE_X) {
                m.bit = out.n_bits++;
                bit_map[g.bit] = m.bit;
            } else if (g.bit >= 0) {
                m.bit = bit_map[g.bit];
            }
            out.gates.push_back(m);
            continue;
        }
        int a = g.q[0], b = g.q[1], t = g.q[2];
        bool is_ccz = g.kind == GateKind::CCZ;
        if (policy == LoweringPolicy::ANCILLA_FREE) {
            if (!is_ccz) out.h(t);
            emit_ccz_7t(out, a, b, t);
            if (!is_ccz) out.h(t);
        } else {
            if (is_ccz) out.h(t);
            int gq = out.add_ancilla();
            int hh = out.add_ancilla();
            emit_and_gadget(out, a, b, gq, hh);
            out.cnot(gq, t);
            int m = out.measure_x(gq);
            out.classical_cz(m, a, b);
            if (is_ccz) out.h(t);
        }
    }
    return out;
}

namespace {

// Longest chain of gates matching `pred` along qubit/classical-bit
// dependencies; non-matching gates pass levels through without occupying a
// layer of their own.
template <class Pred>
long long chain_depth(const Circuit& c, Pred pred) {
    std::vector<long long> ql(c.total_qubits(), 0), bl(c.n_bits, 0);
    long long best = 0;
    for (const Gate& g : c.gates) {
        long long base = 0;
        for (int i = 0; i < gate_arity(g.kind); i++) base = std::max(base, ql[g.q[i]]);
        if (g.bit >= 0) base = std::max(base, bl[g.bit]);
        long long lv = base + (pred(g.kind) ? 1 : 0);
        for (int i = 0; i < gate_arity(g.kind); i++) ql[g.q[i]] = lv;
        if (g.bit >= 0) bl[g.bit] = lv;
        best = std::max(best, lv);
    }
    return best;
}

}  // namespace

long long toffoli_depth(const Circuit& c) {
    return chain_depth(c, [](GateKind k) { return k == GateKind::TOFFOLI || k == GateKind::CCZ; });
}

long long t_depth(const Circuit& c) {
    return chain_depth(c, [](GateKind k) { return k == GateKind::T || k == GateKind::Tdg; });
}

long long reaction_depth(const Circuit& c) {
    // measurement -> classically-controlled-correction rounds; corrections
    // conditioned on the same round commute and share a round
    std::vector<long long> ql(c.total_qubits(), 0), bl(c.n_bits, 0);
    long long best = 0;
    for (const Gate& g : c.gates) {
        long long lv;
        if (g.kind == GateKind::MEASURE_X) {
            lv = ql[g.q[0]] + 1;
            ql[g.q[0]] = lv;
            bl[g.bit] = lv;
        } else if (g.kind == GateKind::CLASSICAL_Z || g.kind == GateKind::CLASSICAL_CZ) {
            lv = bl[g.bit] + 1;
            for (int i = 0; i < gate_arity(g.kind); i++) lv = std::max(lv, ql[g.q[i]]);
            for (int i = 0; i < gate_arity(g.kind); i++) ql[g.q[i]] = lv;
        } else {
            lv = 0;
            for (int i = 0; i < gate_arity(g.kind); i++) lv = std::max(lv, ql[g.q[i]]);
            for (int i = 0; i < gate_arity(g.kind); i++) ql[g.q[i]] = lv;
        }
        best = std::max(best, lv);
    }
    return best;
}

ResourceReport resource_report(const Circuit& c, LoweringPolicy policy) {
    ResourceReport r;
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::TOFFOLI || g.kind == GateKind::CCZ) r.toffoli_count++;
        if (g.kind == GateKind::CNOT) r.cnot_count++;
    }
    r.toffoli_depth = toffoli_depth(c);
    Circuit low = lower_toffoli(c, policy);
    for (const Gate& g : low.gates)
        if (g.kind == GateKind::T || g.kind == GateKind::Tdg) r.t_count++;
    r.t_depth = t_depth(low);
    r.total_qubits = c.total_qubits();
    r.ancilla_count = c.n_ancilla;
    r.reaction_depth = reaction_depth(c);
    return r;
}

}  // namespace ctrlsyn::circuit
