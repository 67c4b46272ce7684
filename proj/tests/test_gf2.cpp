#include "ctrlsyn/gf2.hpp"

#include <random>

#include "doctest.h"

using namespace ctrlsyn::gf2;

namespace {

BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    int r = (int)rows.size();
    int c = (int)rows.begin()->size();
    BitMatrix m(r, c);
    int i = 0;
    for (auto& row : rows) {
        int j = 0;
        for (int v : row) m.set(i, j++, v != 0);
        i++;
    }
    return m;
}

BitMatrix random_matrix(int n, std::mt19937_64& rng) {
    BitMatrix m(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) m.set(i, j, rng() & 1);
    return m;
}

BitMatrix random_invertible(int n, std::mt19937_64& rng) {
    for (;;) {
        BitMatrix m = random_matrix(n, rng);
        if (eliminate(m).inverse) return m;
    }
}

}  // namespace

TEST_CASE("eliminate: identity") {
    auto r = eliminate(BitMatrix::identity(2));
    CHECK(r.rank == 2);
    REQUIRE(r.inverse.has_value());
    CHECK(r.inverse->is_identity());
    CHECK(r.nullspace_basis.empty());
}

TEST_CASE("eliminate: cnot row-operation matrix is an involution") {
    auto a = from_rows({{1, 0}, {1, 1}});
    auto r = eliminate(a);
    CHECK(r.rank == 2);
    REQUIRE(r.inverse.has_value());
    CHECK(*r.inverse == a);
}

TEST_CASE("eliminate: all-ones 2x2 has rank 1, nullspace (1,1)") {
    auto a = from_rows({{1, 1}, {1, 1}});
    auto r = eliminate(a);
    CHECK(r.rank == 1);
    CHECK(!r.inverse.has_value());
    REQUIRE(r.nullspace_basis.size() == 1);
    CHECK(r.nullspace_basis[0].get(0));
    CHECK(r.nullspace_basis[0].get(1));
}

TEST_CASE("eliminate: replaying row_ops gives RREF") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; t++) {
        int n = 2 + (int)(rng() % 9);
        BitMatrix a = random_matrix(n, rng);
        auto r = eliminate(a);
        BitMatrix m = a;
        for (auto [s, d] : r.row_ops) m.row_xor(d, s);
        // check RREF shape: pivots strictly right and alone in their column
        int last_piv = -1;
        for (int i = 0; i < n; i++) {
            int piv = -1;
            for (int j = 0; j < n; j++)
                if (m.get(i, j)) {
                    piv = j;
                    break;
                }
            if (piv < 0) continue;
            CHECK(piv > last_piv);
            last_piv = piv;
            for (int k = 0; k < n; k++)
                if (k != i) CHECK(!m.get(k, piv));
        }
        CHECK(r.rank + (int)r.nullspace_basis.size() == n);
    }
}

TEST_CASE("eliminate invariants on random matrices") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; t++) {
        int n = 1 + (int)(rng() % 32);
        BitMatrix a = random_matrix(n, rng);
        auto r = eliminate(a);
        if (r.inverse) {
            CHECK(mat_mul(a, *r.inverse).is_identity());
            CHECK(mat_mul(*r.inverse, a).is_identity());
        }
        for (auto& v : r.nullspace_basis) CHECK(a.mul_vec(v).is_zero());
    }
}

TEST_CASE("mat_pow") {
    auto a = from_rows({{0, 1}, {1, 1}});
    CHECK(mat_pow(a, 0).is_identity());
    CHECK(mat_pow(a, 2) == from_rows({{1, 1}, {1, 0}}));
    auto cnot = from_rows({{1, 0}, {1, 1}});
    CHECK(mat_mul(cnot, cnot).is_identity());
}

TEST_CASE("matrix text round trip") {
    std::mt19937_64 rng(3);
    BitMatrix a = random_matrix(5, rng);
    CHECK(BitMatrix::parse(a.to_text()) == a);
}

TEST_CASE("poly parse and print") {
    CHECK(F2Poly::parse("x^3+x+1").to_string() == "x^3+x+1");
    CHECK(F2Poly::parse("1011") == F2Poly::parse("x^3+x+1"));
    CHECK(F2Poly::parse("1").to_string() == "1");
    CHECK(F2Poly::parse("x").coeff_word() == 2);
    CHECK(F2Poly::parse("0").is_zero());
    CHECK(F2Poly::parse("x^2 + x + 1").degree() == 2);
}

TEST_CASE("poly arithmetic basics") {
    F2Poly a = F2Poly::parse("x^3+x+1");
    F2Poly b = F2Poly::parse("x+1");
    auto [q, r] = poly_divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(poly_gcd(a * b, a * F2Poly::parse("x")) == a);
    CHECK(poly_derivative(F2Poly::parse("x^3+x^2+1")) == F2Poly::parse("x^2"));
}

TEST_CASE("char/min poly: identity 3x3") {
    auto [cp, mp] = char_and_min_poly(BitMatrix::identity(3));
    CHECK(cp == poly_pow(F2Poly::parse("x+1"), 3));
    CHECK(mp == F2Poly::parse("x+1"));
}

TEST_CASE("char/min poly: companion matrix") {
    F2Poly f = F2Poly::parse("x^2+x+1");
    auto [cp, mp] = char_and_min_poly(companion(f));
    CHECK(cp == f);
    CHECK(mp == f);
}

TEST_CASE("char/min poly: lower bidiagonal B_3") {
    auto b3 = from_rows({{1, 0, 0}, {1, 1, 0}, {0, 1, 1}});
    auto [cp, mp] = char_and_min_poly(b3);
    F2Poly want = poly_pow(F2Poly::parse("x+1"), 3);
    CHECK(cp == want);
    CHECK(mp == want);
}

TEST_CASE("min poly annihilates random matrices") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; t++) {
        int n = 1 + (int)(rng() % 16);
        BitMatrix a = random_matrix(n, rng);
        auto [cp, mp] = char_and_min_poly(a);
        CHECK(cp.degree() == n);
        CHECK(poly_eval_matrix(mp, a).is_zero());
        CHECK(poly_mod(cp, mp).is_zero());  // minimal divides characteristic
    }
}

TEST_CASE("factor_poly examples") {
    auto f1 = factor_poly(F2Poly::parse("x^3+1"));
    REQUIRE(f1.size() == 2);
    CHECK(f1[0].first == F2Poly::parse("x+1"));
    CHECK(f1[0].second == 1);
    CHECK(f1[1].first == F2Poly::parse("x^2+x+1"));
    CHECK(f1[1].second == 1);

    auto f2 = factor_poly(F2Poly::parse("x^2+1"));
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].first == F2Poly::parse("x+1"));
    CHECK(f2[0].second == 2);

    auto f3 = factor_poly(F2Poly::parse("x"));
    REQUIRE(f3.size() == 1);
    CHECK(f3[0].first == F2Poly::parse("x"));
    CHECK(f3[0].second == 1);
}

TEST_CASE("factor_poly recovers random irreducible products") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 60; t++) {
        // build a product of random irreducibles with multiplicities
        std::vector<std::pair<F2Poly, int>> want;
        F2Poly prod = F2Poly::one();
        int nf = 1 + (int)(rng() % 3);
        for (int i = 0; i < nf; i++) {
            F2Poly q;
            do {
                uint64_t bits = (rng() % 250) | 2;
                q = F2Poly::from_coeff_word(bits);
            } while (!is_irreducible(q));
            bool seen = false;
            for (auto& [p, m] : want)
                if (p == q) seen = true;
            if (seen) continue;
            int mult = 1 + (int)(rng() % 3);
            want.push_back({q, mult});
            prod = prod * poly_pow(q, mult);
        }
        std::sort(want.begin(), want.end());
        auto got = factor_poly(prod, t);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); i++) {
            CHECK(got[i].first == want[i].first);
            CHECK(got[i].second == want[i].second);
        }
        // multiply back
        F2Poly back = F2Poly::one();
        for (auto& [q, m] : got) back = back * poly_pow(q, m);
        CHECK(back == prod);
    }
}

TEST_CASE("find_primitive_poly small cases") {
    CHECK(find_primitive_poly(1) == F2Poly::parse("x+1"));
    CHECK(find_primitive_poly(3) == F2Poly::parse("x^3+x+1"));
    CHECK(find_primitive_poly(4) == F2Poly::parse("x^4+x+1"));
}

TEST_CASE("find_primitive_poly: x-power cycle has full length") {
    for (int n = 2; n <= 16; n++) {
        F2Poly f = find_primitive_poly(n);
        CHECK(is_irreducible(f));
        CHECK(f.degree() == n);
        uint64_t m = (uint64_t(1) << n) - 1;
        F2Poly cur = poly_mod(F2Poly::x(), f);
        uint64_t order = 1;
        while (cur != F2Poly::one()) {
            cur = poly_mulmod(cur, F2Poly::x(), f);
            order++;
            REQUIRE(order <= m);
        }
        CHECK(order == m);
    }
}

TEST_CASE("companion matrix shape") {
    F2Poly f = F2Poly::parse("x^3+x+1");
    BitMatrix c = companion(f);
    // subdiagonal ones, coefficients down the last column
    CHECK(c == from_rows({{0, 0, 1}, {1, 0, 1}, {0, 1, 0}}));
}

TEST_CASE("factor_u64") {
    auto f = factor_u64((1ull << 11) - 1);  // 2047 = 23 * 89
    REQUIRE(f.size() == 2);
    CHECK(f[0] == 23);
    CHECK(f[1] == 89);
    CHECK(factor_u64((1ull << 13) - 1) == std::vector<uint64_t>{8191});
}
