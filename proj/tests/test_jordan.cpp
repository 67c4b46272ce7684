#include "ctrlsyn/jordan.hpp"

#include <random>

#include "doctest.h"

using namespace ctrlsyn;
using gf2::BitMatrix;
using gf2::F2Poly;

namespace {

BitMatrix random_invertible(int n, std::mt19937_64& rng) {
    for (;;) {
        BitMatrix m(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) m.set(i, j, rng() & 1);
        if (gf2::eliminate(m).inverse) return m;
    }
}

BitMatrix cyclic_shift(int n) {
    BitMatrix m(n, n);
    for (int i = 0; i + 1 < n; i++) m.set(i + 1, i, true);
    m.set(0, n - 1, true);
    return m;
}

}  // namespace

TEST_CASE("jordan: identity") {
    auto j = jordan::generalized_jordan(BitMatrix::identity(3));
    REQUIRE(j.blocks.size() == 3);
    for (auto& b : j.blocks) CHECK(b == F2Poly::parse("x+1"));
    CHECK(j.S.is_identity());
    auto st = jordan::block_stats(j, BitMatrix::identity(3));
    CHECK(st.c == 3);
    CHECK(st.c_prime == 3);
    CHECK(st.lambda == 3);
}

TEST_CASE("jordan: swap") {
    BitMatrix sw(2, 2);
    sw.set(0, 1, true);
    sw.set(1, 0, true);
    auto j = jordan::generalized_jordan(sw);
    REQUIRE(j.blocks.size() == 1);
    CHECK(j.blocks[0] == F2Poly::parse("x^2+1"));
    CHECK(gf2::mat_mul(gf2::mat_mul(j.S, sw), j.S_inv) == gf2::companion(F2Poly::parse("x^2+1")));
    auto st = jordan::block_stats(j, sw);
    CHECK(st.c == 1);
    CHECK(st.c_prime == 0);
    CHECK(st.lambda == 1);
}

TEST_CASE("jordan: cyclic shift n=3") {
    BitMatrix a = cyclic_shift(3);
    auto j = jordan::generalized_jordan(a);
    REQUIRE(j.blocks.size() == 2);
    CHECK(j.blocks[0] == F2Poly::parse("x+1"));
    CHECK(j.blocks[1] == F2Poly::parse("x^2+x+1"));
    auto st = jordan::block_stats(j, a);
    CHECK(st.c == 1);
    CHECK(st.c_prime == 1);
    CHECK(st.lambda == 1);
}

TEST_CASE("jordan: singular input rejected") {
    BitMatrix z(2, 2);
    CHECK_THROWS(jordan::generalized_jordan(z));
}

TEST_CASE("jordan: reconstruction on random invertible matrices") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 120; t++) {
        int n = 1 + (int)(rng() % 16);
        BitMatrix a = random_invertible(n, rng);
        auto j = jordan::generalized_jordan(a);  // reconstruction asserted inside
        int total = 0;
        for (auto& b : j.blocks) {
            total += b.degree();
            CHECK(b.coeff(0));
        }
        CHECK(total == n);
        auto st = jordan::block_stats(j, a);
        CHECK(st.c >= st.c_prime);
        // at most (n - c') non-trivial unipotent blocks of size >= 2
        CHECK(2 * (st.c - st.c_prime) <= n - st.c_prime);
    }
}

TEST_CASE("jordan: similarity invariance of the block multiset") {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 40; t++) {
        int n = 2 + (int)(rng() % 7);
        BitMatrix a = random_invertible(n, rng);
        BitMatrix tmat = random_invertible(n, rng);
        BitMatrix tinv = *gf2::eliminate(tmat).inverse;
        BitMatrix conj = gf2::mat_mul(gf2::mat_mul(tmat, a), tinv);
        auto ja = jordan::generalized_jordan(a);
        auto jc = jordan::generalized_jordan(conj);
        REQUIRE(ja.blocks.size() == jc.blocks.size());
        for (size_t i = 0; i < ja.blocks.size(); i++) CHECK(ja.blocks[i] == jc.blocks[i]);
    }
}

TEST_CASE("jordan: lambda equals c on many instances") {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 200; t++) {
        int n = 1 + (int)(rng() % 10);
        BitMatrix a = random_invertible(n, rng);
        auto j = jordan::generalized_jordan(a);
        CHECK_NOTHROW(jordan::block_stats(j, a));  // asserts lambda == c inside
    }
}
