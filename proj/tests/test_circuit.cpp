#include "ctrlsyn/circuit.hpp"

#include <random>

#include "ctrlsyn/sim.hpp"
#include "doctest.h"

using namespace ctrlsyn;
using circuit::Circuit;
using circuit::GateKind;
using circuit::LoweringPolicy;

namespace {

gf2::BitMatrix random_invertible(int n, std::mt19937_64& rng) {
    for (;;) {
        gf2::BitMatrix m(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) m.set(i, j, rng() & 1);
        if (gf2::eliminate(m).inverse) return m;
    }
}

}  // namespace

TEST_CASE("parity_matrix basics") {
    Circuit empty(2);
    CHECK(circuit::parity_matrix(empty).is_identity());

    Circuit c(2);
    c.cnot(0, 1);
    gf2::BitMatrix want(2, 2);
    want.set(0, 0, true);
    want.set(1, 0, true);
    want.set(1, 1, true);
    CHECK(circuit::parity_matrix(c) == want);

    Circuit sw(2);
    sw.cnot(0, 1);
    sw.cnot(1, 0);
    sw.cnot(0, 1);
    gf2::BitMatrix swm(2, 2);
    swm.set(0, 1, true);
    swm.set(1, 0, true);
    CHECK(circuit::parity_matrix(sw) == swm);
    Circuit sw2(2);
    sw2.swap(0, 1);
    CHECK(circuit::parity_matrix(sw2) == swm);
}

TEST_CASE("parity_matrix rejects non-CNOT gates") {
    Circuit c(2);
    c.h(0);
    CHECK_THROWS(circuit::parity_matrix(c));
}

TEST_CASE("parity_matrix is an antihomomorphism under append") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 30; t++) {
        int n = 2 + (int)(rng() % 5);
        Circuit c1(n), c2(n);
        for (int i = 0; i < 8; i++) {
            int a = (int)(rng() % n), b = (int)(rng() % n);
            if (a == b) continue;
            c1.cnot(a, b);
            int x = (int)(rng() % n), y = (int)(rng() % n);
            if (x != y) c2.cnot(x, y);
        }
        Circuit both = c1;
        both.append(c2);
        CHECK(circuit::parity_matrix(both) ==
              gf2::mat_mul(circuit::parity_matrix(c2), circuit::parity_matrix(c1)));
    }
}

TEST_CASE("synth_cnot_from_matrix") {
    CHECK(circuit::synth_cnot_from_matrix(gf2::BitMatrix::identity(3)).gates.empty());

    gf2::BitMatrix cn(2, 2);
    cn.set(0, 0, true);
    cn.set(1, 0, true);
    cn.set(1, 1, true);
    Circuit c = circuit::synth_cnot_from_matrix(cn);
    REQUIRE(c.gates.size() == 1);
    CHECK(c.gates[0].kind == GateKind::CNOT);
    CHECK(c.gates[0].q[0] == 0);
    CHECK(c.gates[0].q[1] == 1);

    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; t++) {
        int n = 2 + (int)(rng() % 7);  // up to 8
        gf2::BitMatrix a = random_invertible(n, rng);
        Circuit s = circuit::synth_cnot_from_matrix(a);
        CHECK((int)s.gates.size() <= n * n);
        CHECK(circuit::parity_matrix(s) == a);
    }
}

TEST_CASE("resource_report on Toffolis") {
    Circuit c(3);
    c.ccx(0, 1, 2);
    auto r = circuit::resource_report(c, LoweringPolicy::ANCILLA_FREE);
    CHECK(r.toffoli_count == 1);
    CHECK(r.toffoli_depth == 1);
    CHECK(r.t_count == 7);
    CHECK(r.t_depth == 3);

    auto rm = circuit::resource_report(c, LoweringPolicy::MEASURE_ASSISTED);
    CHECK(rm.t_count == 4);
    CHECK(rm.t_depth == 1);

    Circuit two(6);
    two.ccx(0, 1, 2);
    two.ccx(3, 4, 5);
    CHECK(circuit::resource_report(two, LoweringPolicy::ANCILLA_FREE).toffoli_depth == 1);

    Circuit noff(2);
    noff.h(0);
    noff.t(1);
    Circuit low = circuit::lower_toffoli(noff, LoweringPolicy::ANCILLA_FREE);
    CHECK(low.gates.size() == noff.gates.size());
}

TEST_CASE("toffoli lowering is unitary-equivalent") {
    Circuit c(3);
    c.ccx(0, 1, 2);
    Circuit free = circuit::lower_toffoli(c, LoweringPolicy::ANCILLA_FREE);
    auto r1 = sim::assert_equiv(c, free, sim::EquivMode::UNITARY_GLOBAL_PHASE);
    CHECK(r1.pass);

    Circuit jones = circuit::lower_toffoli(c, LoweringPolicy::MEASURE_ASSISTED);
    auto r2 = sim::assert_equiv(c, jones, sim::EquivMode::BRANCHWISE_COMMON_PHASE);
    CHECK(r2.pass);

    Circuit z(3);
    z.ccz(0, 1, 2);
    auto r3 = sim::assert_equiv(z, circuit::lower_toffoli(z, LoweringPolicy::ANCILLA_FREE),
                                sim::EquivMode::UNITARY_GLOBAL_PHASE);
    CHECK(r3.pass);
    auto r4 = sim::assert_equiv(z, circuit::lower_toffoli(z, LoweringPolicy::MEASURE_ASSISTED),
                                sim::EquivMode::BRANCHWISE_COMMON_PHASE);
    CHECK(r4.pass);
}

TEST_CASE("lowering equivalence on random mixed circuits") {
    std::mt19937_64 rng(97);
    for (int t = 0; t < 10; t++) {
        int n = 3 + (int)(rng() % 2);
        Circuit c(n);
        for (int i = 0; i < 12; i++) {
            int a = (int)(rng() % n), b = (int)(rng() % n), d = (int)(rng() % n);
            switch (rng() % 5) {
                case 0:
                    c.h(a);
                    break;
                case 1:
                    c.t(a);
                    break;
                case 2:
                    if (a != b) c.cnot(a, b);
                    break;
                case 3:
                    if (a != b && b != d && a != d) c.ccx(a, b, d);
                    break;
                case 4:
                    c.s(a);
                    break;
            }
        }
        CHECK(sim::assert_equiv(c, circuit::lower_toffoli(c, LoweringPolicy::ANCILLA_FREE),
                                sim::EquivMode::UNITARY_GLOBAL_PHASE)
                  .pass);
        CHECK(sim::assert_equiv(c, circuit::lower_toffoli(c, LoweringPolicy::MEASURE_ASSISTED),
                                sim::EquivMode::BRANCHWISE_COMMON_PHASE)
                  .pass);
    }
}

TEST_CASE("text format round trip") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; t++) {
        Circuit c(3, 2);
        int measured = -1;
        for (int i = 0; i < 15; i++) {
            int a = (int)(rng() % 3), b = (a + 1 + (int)(rng() % 2)) % 3;
            switch (rng() % 9) {
                case 0: c.x(a); break;
                case 1: c.h(a); break;
                case 2: c.sdg(a); break;
                case 3: c.tdg(a); break;
                case 4: c.cnot(a, b); break;
                case 5: c.cz(a, b); break;
                case 6: c.swap(a, b); break;
                case 7: c.ccz(0, 1, 2); break;
                case 8:
                    if (measured < 0)
                        measured = c.measure_x(3 + (int)(rng() % 2));
                    else if (rng() & 1)
                        c.classical_z(measured, a);
                    else
                        c.classical_cz(measured, a, b);
                    break;
            }
        }
        std::string text = c.to_text();
        Circuit back = Circuit::parse(text);
        CHECK(back.n_qubits == c.n_qubits);
        CHECK(back.n_ancilla == c.n_ancilla);
        REQUIRE(back.gates.size() == c.gates.size());
        for (size_t i = 0; i < c.gates.size(); i++) {
            CHECK(back.gates[i].kind == c.gates[i].kind);
            CHECK(back.gates[i].q == c.gates[i].q);
            CHECK(back.gates[i].bit == c.gates[i].bit);
        }
        CHECK(back.to_text() == text);
    }
}

TEST_CASE("parse of the documented example") {
    const char* text =
        "qubits 4 ancilla 3\n"
        "cnot 0 1\n"
        "ccx 0 1 2\n"
        "h 3\n"
        "t 2\n"
        "mx 4 -> m0\n"
        "z? m0 1\n"
        "cz? m0 0 2\n";
    Circuit c = Circuit::parse(text);
    CHECK(c.n_qubits == 4);
    CHECK(c.n_ancilla == 3);
    CHECK(c.gates.size() == 7);
    CHECK(c.n_bits == 1);
    CHECK(c.to_text() == text);
}

TEST_CASE("parse errors") {
    CHECK_THROWS(Circuit::parse("cnot 0 1\n"));                     // missing header
    CHECK_THROWS(Circuit::parse("qubits 2\nfoo 0\n"));              // unknown gate
    CHECK_THROWS(Circuit::parse("qubits 2\ncnot 0 0\n"));           // repeated operand
    CHECK_THROWS(Circuit::parse("qubits 2\ncnot 0 5\n"));           // out of range
    CHECK_THROWS(Circuit::parse("qubits 2 ancilla 1\nmx 0 -> m0\n"));  // measure data wire
    CHECK_THROWS(Circuit::parse("qubits 2 ancilla 1\nz? m0 0\n"));  // bit before measurement
}

TEST_CASE("reaction depth") {
    Circuit c(2, 2);
    int m0 = c.measure_x(2);
    c.classical_z(m0, 0);
    CHECK(circuit::reaction_depth(c) == 2);
    int m1 = c.measure_x(3);
    c.classical_cz(m1, 0, 1);
    // both corrections commute and fire in the same round
    CHECK(circuit::reaction_depth(c) == 2);

    Circuit chained(1, 2);
    int a0 = chained.measure_x(1);
    chained.classical_z(a0, 0);
    chained.h(0);
    int a1 = chained.measure_x(2);
    chained.classical_z(a1, 0);
    // the H between rounds forces sequencing, but the second measurement
    // itself does not depend on the first round
    CHECK(circuit::reaction_depth(chained) == 2);
}
