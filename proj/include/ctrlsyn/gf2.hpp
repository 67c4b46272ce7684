#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ctrlsyn::gf2 {

// Dense bit vector over GF(2), packed into 64-bit words.
struct BitVec {
    int n = 0;
    std::vector<uint64_t> w;

    BitVec() = default;
    explicit BitVec(int n_) : n(n_), w((n_ + 63) / 64, 0) {}

    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w[i >> 6] |= m;
        else
            w[i >> 6] &= ~m;
    }
    void flip(int i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }
    void xor_with(const BitVec& o) {
        for (size_t k = 0; k < w.size(); k++) w[k] ^= o.w[k];
    }
    bool is_zero() const {
        for (uint64_t x : w)
            if (x) return false;
        return true;
    }
    bool dot(const BitVec& o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < w.size(); k++) acc ^= w[k] & o.w[k];
        return __builtin_parityll(acc);
    }
    bool operator==(const BitVec& o) const { return n == o.n && w == o.w; }
};

// Dense matrix over GF(2); rows packed into 64-bit words.
struct BitMatrix {
    int rows = 0, cols = 0;
    int wpr = 0;  // words per row
    std::vector<uint64_t> w;

    BitMatrix() = default;
    BitMatrix(int r, int c) : rows(r), cols(c), wpr((c + 63) / 64), w(size_t(r) * wpr, 0) {}

    static BitMatrix identity(int n) {
        BitMatrix m(n, n);
        for (int i = 0; i < n; i++) m.set(i, i, true);
        return m;
    }

    bool get(int r, int c) const { return (w[size_t(r) * wpr + (c >> 6)] >> (c & 63)) & 1; }
    void set(int r, int c, bool v) {
        uint64_t m = uint64_t(1) << (c & 63);
        size_t idx = size_t(r) * wpr + (c >> 6);
        if (v)
            w[idx] |= m;
        else
            w[idx] &= ~m;
    }
    void flip(int r, int c) { w[size_t(r) * wpr + (c >> 6)] ^= uint64_t(1) << (c & 63); }

    // row[dst] ^= row[src]
    void row_xor(int dst, int src) {
        uint64_t* d = &w[size_t(dst) * wpr];
        const uint64_t* s = &w[size_t(src) * wpr];
        for (int k = 0; k < wpr; k++) d[k] ^= s[k];
    }

    BitVec row(int r) const {
        BitVec v(cols);
        for (int k = 0; k < wpr; k++) v.w[k] = w[size_t(r) * wpr + k];
        return v;
    }
    void set_row(int r, const BitVec& v) {
        for (int k = 0; k < wpr; k++) w[size_t(r) * wpr + k] = v.w[k];
    }
    BitVec col(int c) const {
        BitVec v(rows);
        for (int r = 0; r < rows; r++) v.set(r, get(r, c));
        return v;
    }

    bool is_identity() const {
        if (rows != cols) return false;
        for (int i = 0; i < rows; i++)
            for (int j = 0; j < cols; j++)
                if (get(i, j) != (i == j)) return false;
        return true;
    }
    bool is_zero() const {
        for (uint64_t x : w)
            if (x) return false;
        return true;
    }
    bool operator==(const BitMatrix& o) const {
        return rows == o.rows && cols == o.cols && w == o.w;
    }

    BitMatrix transpose() const {
        BitMatrix t(cols, rows);
        for (int r = 0; r < rows; r++)
            for (int c = 0; c < cols; c++)
                if (get(r, c)) t.set(c, r, true);
        return t;
    }

    BitMatrix operator+(const BitMatrix& o) const {
        BitMatrix s = *this;
        for (size_t k = 0; k < w.size(); k++) s.w[k] ^= o.w[k];
        return s;
    }

    BitVec mul_vec(const BitVec& v) const {
        BitVec out(rows);
        for (int r = 0; r < rows; r++) {
            uint64_t acc = 0;
            for (int k = 0; k < wpr; k++) acc ^= w[size_t(r) * wpr + k] & v.w[k];
            out.set(r, __builtin_parityll(acc));
        }
        return out;
    }

    std::string to_text() const;
    static BitMatrix parse(const std::string& text);
};

struct EliminationResult {
    int rank = 0;
    std::optional<BitMatrix> inverse;
    std::vector<BitVec> nullspace_basis;
    // (source row, target row) additions; replaying them on the input gives RREF.
    std::vector<std::pair<int, int>> row_ops;
};

EliminationResult eliminate(const BitMatrix& a);

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);
BitMatrix mat_pow(const BitMatrix& a, uint64_t e);

int rank(const BitMatrix& a);
int nullity(const BitMatrix& a);
std::optional<BitMatrix> inverse(const BitMatrix& a);

// Polynomial over GF(2), coefficients packed lowest degree first.
// The zero polynomial has degree -1 (distinguished sentinel).
struct F2Poly {
    std::vector<uint64_t> w;

    F2Poly() = default;

    static F2Poly zero() { return F2Poly(); }
    static F2Poly one() { return from_coeff_word(1); }
    static F2Poly x() { return from_coeff_word(2); }
    static F2Poly from_coeff_word(uint64_t bits) {
        F2Poly p;
        if (bits) p.w.push_back(bits);
        return p;
    }
    static F2Poly monomial(int d) {
        F2Poly p;
        p.w.assign(d / 64 + 1, 0);
        p.w[d >> 6] = uint64_t(1) << (d & 63);
        return p;
    }

    bool is_zero() const { return w.empty(); }
    int degree() const;
    bool coeff(int i) const {
        int k = i >> 6;
        if (k >= (int)w.size()) return false;
        return (w[k] >> (i & 63)) & 1;
    }
    void set_coeff(int i, bool v) {
        int k = i >> 6;
        if (k >= (int)w.size()) w.resize(k + 1, 0);
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w[k] |= m;
        else
            w[k] &= ~m;
        trim();
    }
    void trim() {
        while (!w.empty() && w.back() == 0) w.pop_back();
    }
    // packed coefficient bits as an integer, valid for degree < 64
    uint64_t coeff_word() const { return w.empty() ? 0 : w[0]; }

    bool operator==(const F2Poly& o) const { return w == o.w; }
    bool operator!=(const F2Poly& o) const { return !(*this == o); }
    // order by (degree, coefficient bits), low degree first
    bool operator<(const F2Poly& o) const;

    F2Poly operator+(const F2Poly& o) const;
    F2Poly operator*(const F2Poly& o) const;
    F2Poly shifted(int k) const;  // * x^k

    std::string to_string() const;
    static F2Poly parse(const std::string& text);
};

std::pair<F2Poly, F2Poly> poly_divmod(const F2Poly& a, const F2Poly& b);
F2Poly poly_mod(const F2Poly& a, const F2Poly& b);
F2Poly poly_div(const F2Poly& a, const F2Poly& b);
F2Poly poly_gcd(F2Poly a, F2Poly b);
F2Poly poly_lcm(const F2Poly& a, const F2Poly& b);
F2Poly poly_pow(const F2Poly& a, int e);
F2Poly poly_derivative(const F2Poly& a);
F2Poly poly_mulmod(const F2Poly& a, const F2Poly& b, const F2Poly& f);
F2Poly poly_powmod(const F2Poly& a, uint64_t e, const F2Poly& f);

// p(A) for a square bit matrix A
BitMatrix poly_eval_matrix(const F2Poly& p, const BitMatrix& a);

// Companion matrix of a monic polynomial: ones on the first subdiagonal,
// coefficients a_0..a_{d-1} down the last column.
BitMatrix companion(const F2Poly& f);

// (characteristic, minimal) polynomial of a square matrix
std::pair<F2Poly, F2Poly> char_and_min_poly(const BitMatrix& a);

bool is_irreducible(const F2Poly& f);

// Irreducible factors with multiplicities, sorted by (degree, coefficient
// bits). Distinct-degree separation followed by seeded equal-degree
// splitting; deterministic for a fixed seed.
std::vector<std::pair<F2Poly, int>> factor_poly(const F2Poly& f, uint64_t seed = 0);

// Smallest (by coefficient bits) irreducible f of degree n such that x
// generates the full multiplicative group mod f. Requires 1 <= n <= 63.
F2Poly find_primitive_poly(int n);

// Prime factorization of small integers; Miller-Rabin plus trial division.
std::vector<uint64_t> factor_u64(uint64_t m);

}  // namespace ctrlsyn::gf2
