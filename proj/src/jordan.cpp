#include "ctrlsyn/jordan.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctrlsyn::jordan {

using gf2::BitMatrix;
using gf2::BitVec;
using gf2::F2Poly;

namespace {

// Row space with pivot-indexed reduction (pivot = highest set bit).
struct Span {
    int n;
    std::vector<BitVec> rows;
    std::vector<int> pivot_to_row;
    int count = 0;

    explicit Span(int n_) : n(n_), rows(n_), pivot_to_row(n_, -1) {}

    bool contains(BitVec v) const {
        for (int b = n - 1; b >= 0; b--) {
            if (!v.get(b)) continue;
            if (pivot_to_row[b] < 0) return false;
            v.xor_with(rows[pivot_to_row[b]]);
        }
        return true;
    }
    bool add(BitVec v) {
        for (int b = n - 1; b >= 0; b--) {
            if (!v.get(b)) continue;
            if (pivot_to_row[b] < 0) {
                rows[count] = std::move(v);
                pivot_to_row[b] = count;
                count++;
                return true;
            }
            v.xor_with(rows[pivot_to_row[b]]);
        }
        return false;
    }
};

}  // namespace

gf2::BitMatrix JordanDecomposition::block_diagonal() const {
    BitMatrix j(n, n);
    int off = 0;
    for (const F2Poly& f : blocks) {
        int d = f.degree();
        BitMatrix c = gf2::companion(f);
        for (int r = 0; r < d; r++)
            for (int cc = 0; cc < d; cc++)
                if (c.get(r, cc)) j.set(off + r, off + cc, true);
        off += d;
    }
    return j;
}

std::vector<int> JordanDecomposition::block_offsets() const {
    std::vector<int> off;
    int cur = 0;
    for (const F2Poly& f : blocks) {
        off.push_back(cur);
        cur += f.degree();
    }
    return off;
}

JordanDecomposition generalized_jordan(const BitMatrix& a) {
    if (a.rows != a.cols) throw std::invalid_argument("generalized_jordan: square matrix required");
    int n = a.rows;
    if (!gf2::eliminate(a).inverse)
        throw std::invalid_argument("generalized_jordan: singular matrix");

    auto [charpoly, minpoly] = gf2::char_and_min_poly(a);
    auto factors = gf2::factor_poly(charpoly);

    // one generator vector per block: (q, k, v)
    struct Gen {
        F2Poly q;
        int k;
        BitVec v;
    };
    std::vector<Gen> gens;
    Span acc(n);

    for (auto& [q, mult] : factors) {
        // exponent of q in the minimal polynomial caps the block sizes
        int emax = 0;
        {
            F2Poly rem = minpoly;
            while (true) {
                auto [quo, r] = gf2::poly_divmod(rem, q);
                if (!r.is_zero()) break;
                rem = quo;
                emax++;
            }
        }
        BitMatrix nq = gf2::poly_eval_matrix(q, a);
        std::vector<BitMatrix> npow(emax + 1, BitMatrix::identity(n));
        for (int j = 1; j <= emax; j++) npow[j] = gf2::mat_mul(npow[j - 1], nq);

        for (int j = emax; j >= 1; j--) {
            auto kernel = gf2::eliminate(npow[j]).nullspace_basis;
            for (auto& b : kernel) {
                BitVec w = npow[j - 1].mul_vec(b);
                if (w.is_zero() || acc.contains(w)) continue;
                // b generates a fresh cyclic block of size deg(q)*j
                int d = q.degree() * j;
                BitVec cur = b;
                for (int t = 0; t < d; t++) {
                    if (!acc.add(cur))
                        throw std::logic_error("generalized_jordan: cyclic span collision");
                    cur = a.mul_vec(cur);
                }
                gens.push_back({q, j, b});
            }
        }
    }
    if (acc.count != n) throw std::logic_error("generalized_jordan: decomposition incomplete");

    std::sort(gens.begin(), gens.end(), [](const Gen& x, const Gen& y) {
        if (x.q != y.q) return x.q < y.q;
        return x.k < y.k;
    });

    JordanDecomposition res;
    res.n = n;
    BitMatrix t(n, n);
    int col = 0;
    for (auto& g : gens) {
        F2Poly f = gf2::poly_pow(g.q, g.k);
        if (!f.coeff(0)) throw std::logic_error("generalized_jordan: block with f(0) = 0");
        res.blocks.push_back(f);
        res.block_parts.push_back({g.q, g.k});
        BitVec cur = g.v;
        for (int s = 0; s < f.degree(); s++) {
            for (int r = 0; r < n; r++) t.set(r, col, cur.get(r));
            col++;
            cur = a.mul_vec(cur);
        }
    }
    res.S_inv = t;
    auto inv = gf2::eliminate(t).inverse;
    if (!inv) throw std::logic_error("generalized_jordan: basis not invertible");
    res.S = *inv;

    // reconstruction check by direct multiplication
    BitMatrix check = gf2::mat_mul(gf2::mat_mul(res.S, a), res.S_inv);
    if (!(check == res.block_diagonal()))
        throw std::logic_error("generalized_jordan: reconstruction failed");
    return res;
}

BlockStats block_stats(const JordanDecomposition& j, const BitMatrix& a) {
    BlockStats st;
    F2Poly xp1 = F2Poly::parse("x+1");
    for (auto& [q, k] : j.block_parts) {
        if (q == xp1) {
            st.c++;
            if (k == 1) st.c_prime++;
        }
    }
    BitMatrix api = a + BitMatrix::identity(a.rows);
    st.lambda = gf2::nullity(api);
    if (st.lambda != st.c)
        throw std::logic_error("block_stats: lambda != c (eigenvector count mismatch)");
    return st;
}

}  // namespace ctrlsyn::jordan
