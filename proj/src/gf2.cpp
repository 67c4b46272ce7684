#include "ctrlsyn/gf2.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ctrlsyn::gf2 {

std::string BitMatrix::to_text() const {
    std::ostringstream os;
    os << rows << " " << cols << "\n";
    for (int r = 0; r < rows; r++) {
        for (int c = 0; c < cols; c++) os << (get(r, c) ? '1' : '0');
        os << "\n";
    }
    return os.str();
}

BitMatrix BitMatrix::parse(const std::string& text) {
    std::istringstream is(text);
    int r, c;
    if (!(is >> r >> c) || r <= 0 || c <= 0) throw std::invalid_argument("matrix: bad header");
    BitMatrix m(r, c);
    for (int i = 0; i < r; i++) {
        std::string row;
        if (!(is >> row) || (int)row.size() != c) throw std::invalid_argument("matrix: bad row");
        for (int j = 0; j < c; j++) {
            if (row[j] != '0' && row[j] != '1') throw std::invalid_argument("matrix: bad digit");
            m.set(i, j, row[j] == '1');
        }
    }
    return m;
}

EliminationResult eliminate(const BitMatrix& a) {
    EliminationResult res;
    BitMatrix m = a;
    std::vector<int> pivot_cols;
    int pr = 0;  // next pivot row
    for (int c = 0; c < m.cols && pr < m.rows; c++) {
        int r = -1;
        for (int i = pr; i < m.rows; i++)
            if (m.get(i, c)) {
                r = i;
                break;
            }
        if (r < 0) continue;
        if (r != pr) {
            m.row_xor(pr, r);
            res.row_ops.push_back({r, pr});
        }
        for (int i = 0; i < m.rows; i++) {
            if (i != pr && m.get(i, c)) {
                m.row_xor(i, pr);
                res.row_ops.push_back({pr, i});
            }
        }
        pivot_cols.push_back(c);
        pr++;
    }
    res.rank = pr;
    if (a.rows == a.cols && res.rank == a.cols) {
        BitMatrix inv = BitMatrix::identity(a.rows);
        for (auto [s, t] : res.row_ops) inv.row_xor(t, s);
        res.inverse = std::move(inv);
    }
    // free columns give the nullspace
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivot_cols) is_pivot[c] = true;
    for (int f = 0; f < m.cols; f++) {
        if (is_pivot[f]) continue;
        BitVec v(m.cols);
        v.set(f, true);
        for (size_t p = 0; p < pivot_cols.size(); p++)
            if (m.get((int)p, f)) v.set(pivot_cols[p], true);
        res.nullspace_basis.push_back(std::move(v));
    }
    return res;
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
    BitMatrix out(a.rows, b.cols);
    for (int r = 0; r < a.rows; r++) {
        uint64_t* dst = &out.w[size_t(r) * out.wpr];
        for (int k = 0; k < a.cols; k++) {
            if (!a.get(r, k)) continue;
            const uint64_t* src = &b.w[size_t(k) * b.wpr];
            for (int j = 0; j < b.wpr; j++) dst[j] ^= src[j];
        }
    }
    return out;
}

BitMatrix mat_pow(const BitMatrix& a, uint64_t e) {
    if (a.rows != a.cols) throw std::invalid_argument("mat_pow: square matrix required");
    BitMatrix acc = BitMatrix::identity(a.rows);
    BitMatrix base = a;
    while (e) {
        if (e & 1) acc = mat_mul(acc, base);
        e >>= 1;
        if (e) base = mat_mul(base, base);
    }
    return acc;
}

int rank(const BitMatrix& a) { return eliminate(a).rank; }
int nullity(const BitMatrix& a) { return a.cols - eliminate(a).rank; }
std::optional<BitMatrix> inverse(const BitMatrix& a) { return eliminate(a).inverse; }

int F2Poly::degree() const {
    if (w.empty()) return -1;
    int k = (int)w.size() - 1;
    return k * 64 + 63 - __builtin_clzll(w[k]);
}

bool F2Poly::operator<(const F2Poly& o) const {
    int d = degree(), e = o.degree();
    if (d != e) return d < e;
    for (int k = (int)std::max(w.size(), o.w.size()) - 1; k >= 0; k--) {
        uint64_t x = k < (int)w.size() ? w[k] : 0;
        uint64_t y = k < (int)o.w.size() ? o.w[k] : 0;
        if (x != y) return x < y;
    }
    return false;
}

F2Poly F2Poly::operator+(const F2Poly& o) const {
    F2Poly s;
    s.w.resize(std::max(w.size(), o.w.size()), 0);
    for (size_t k = 0; k < s.w.size(); k++) {
        if (k < w.size()) s.w[k] ^= w[k];
        if (k < o.w.size()) s.w[k] ^= o.w[k];
    }
    s.trim();
    return s;
}

F2Poly F2Poly::shifted(int k) const {
    if (is_zero()) return {};
    F2Poly s;
    int words = k / 64, bits = k % 64;
    s.w.assign(w.size() + words + 1, 0);
    for (size_t i = 0; i < w.size(); i++) {
        s.w[i + words] ^= w[i] << bits;
        if (bits) s.w[i + words + 1] ^= w[i] >> (64 - bits);
    }
    s.trim();
    return s;
}

F2Poly F2Poly::operator*(const F2Poly& o) const {
    if (is_zero() || o.is_zero()) return {};
    F2Poly acc;
    acc.w.assign(w.size() + o.w.size(), 0);
    for (size_t k = 0; k < o.w.size(); k++) {
        uint64_t word = o.w[k];
        while (word) {
            int b = __builtin_ctzll(word);
            word &= word - 1;
            int shift = (int)k * 64 + b;
            int ws = shift / 64, bs = shift % 64;
            for (size_t i = 0; i < w.size(); i++) {
                acc.w[i + ws] ^= w[i] << bs;
                if (bs && i + ws + 1 < acc.w.size()) acc.w[i + ws + 1] ^= w[i] >> (64 - bs);
            }
        }
    }
    acc.trim();
    return acc;
}

std::pair<F2Poly, F2Poly> poly_divmod(const F2Poly& a, const F2Poly& b) {
    if (b.is_zero()) throw std::invalid_argument("poly_divmod: division by zero");
    F2Poly r = a, q;
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        int shift = r.degree() - db;
        q.set_coeff(shift, true);
        r = r + b.shifted(shift);
    }
    return {q, r};
}

F2Poly poly_mod(const F2Poly& a, const F2Poly& b) { return poly_divmod(a, b).second; }
F2Poly poly_div(const F2Poly& a, const F2Poly& b) { return poly_divmod(a, b).first; }

F2Poly poly_gcd(F2Poly a, F2Poly b) {
    while (!b.is_zero()) {
        F2Poly r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

F2Poly poly_lcm(const F2Poly& a, const F2Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return poly_div(a * b, poly_gcd(a, b));
}

F2Poly poly_pow(const F2Poly& a, int e) {
    F2Poly acc = F2Poly::one(), base = a;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

F2Poly poly_derivative(const F2Poly& a) {
    F2Poly d;
    for (int i = 1; i <= a.degree(); i += 2)
        if (a.coeff(i)) d.set_coeff(i - 1, true);
    return d;
}

F2Poly poly_mulmod(const F2Poly& a, const F2Poly& b, const F2Poly& f) {
    return poly_mod(a * b, f);
}

F2Poly poly_powmod(const F2Poly& a, uint64_t e, const F2Poly& f) {
    F2Poly acc = poly_mod(F2Poly::one(), f), base = poly_mod(a, f);
    while (e) {
        if (e & 1) acc = poly_mulmod(acc, base, f);
        e >>= 1;
        if (e) base = poly_mulmod(base, base, f);
    }
    return acc;
}

BitMatrix poly_eval_matrix(const F2Poly& p, const BitMatrix& a) {
    if (a.rows != a.cols) throw std::invalid_argument("poly_eval_matrix: square matrix required");
    int n = a.rows;
    BitMatrix acc(n, n);
    for (int i = p.degree(); i >= 0; i--) {
        acc = mat_mul(acc, a);
        if (p.coeff(i))
            for (int d = 0; d < n; d++) acc.flip(d, d);
    }
    return acc;
}

BitMatrix companion(const F2Poly& f) {
    int d = f.degree();
    if (d < 1) throw std::invalid_argument("companion: degree >= 1 required");
    BitMatrix c(d, d);
    for (int i = 1; i < d; i++) c.set(i, i - 1, true);
    for (int i = 0; i < d; i++) c.set(i, d - 1, f.coeff(i));
    return c;
}

std::string F2Poly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; i--) {
        if (!coeff(i)) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0)
            os << "1";
        else if (i == 1)
            os << "x";
        else
            os << "x^" << i;
    }
    return os.str();
}

F2Poly F2Poly::parse(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!isspace((unsigned char)ch)) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("poly: empty");
    bool bitstring = s.find_first_not_of("01") == std::string::npos;
    F2Poly p;
    if (bitstring) {
        // most significant (highest degree) coefficient first
        int n = (int)s.size();
        for (int i = 0; i < n; i++)
            if (s[i] == '1') p.set_coeff(n - 1 - i, true);
        return p;
    }
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find('+', pos);
        std::string term = s.substr(pos, next == std::string::npos ? next : next - pos);
        pos = next == std::string::npos ? s.size() : next + 1;
        if (term.empty()) throw std::invalid_argument("poly: empty term");
        int d;
        if (term == "1")
            d = 0;
        else if (term == "x")
            d = 1;
        else if (term.rfind("x^", 0) == 0)
            d = std::stoi(term.substr(2));
        else
            throw std::invalid_argument("poly: bad term '" + term + "'");
        if (p.coeff(d)) throw std::invalid_argument("poly: repeated term");
        p.set_coeff(d, true);
    }
    return p;
}

namespace {

// Echelonized set of bit vectors, indexed by pivot (highest set bit).
// Rows are reduced high pivot to low, so one downward pass suffices.
struct Echelon {
    int n = 0;
    std::vector<BitVec> rows;
    std::vector<int> pivot_to_row;
    size_t count = 0;

    explicit Echelon(int n_) : n(n_), rows(n_), pivot_to_row(n_, -1) {}

    // reduce v in place; returns the pivot it lands on, or -1 if it vanishes
    int reduce(BitVec& v) const {
        for (int b = n - 1; b >= 0; b--) {
            if (!v.get(b)) continue;
            if (pivot_to_row[b] >= 0)
                v.xor_with(rows[pivot_to_row[b]]);
            else
                return b;
        }
        return -1;
    }
    bool add(BitVec v) {
        int p = reduce(v);
        if (p < 0) return false;
        rows[count] = std::move(v);
        pivot_to_row[p] = (int)count;
        count++;
        return true;
    }
    bool contains(BitVec v) const { return reduce(v) < 0; }
    size_t size() const { return count; }
};

// Minimal polynomial of v under A relative to the subspace spanned by `fixed`.
// Returns the monic p of least degree with p(A)v in that span.
F2Poly relative_min_poly(const BitMatrix& a, const BitVec& v, const Echelon& fixed,
                         std::vector<BitVec>* chain_out) {
    int n = a.rows;
    std::vector<BitVec> red(n);  // echelonized chain vectors, indexed by slot
    std::vector<F2Poly> red_rep(n);
    std::vector<int> piv_slot(n, -1);
    int nred = 0;
    BitVec raw = v;
    for (int j = 0;; j++) {
        BitVec r = raw;
        F2Poly rep = F2Poly::monomial(j);
        for (int b = n - 1; b >= 0; b--) {
            if (!r.get(b)) continue;
            if (fixed.pivot_to_row[b] >= 0) {
                r.xor_with(fixed.rows[fixed.pivot_to_row[b]]);
            } else if (piv_slot[b] >= 0) {
                r.xor_with(red[piv_slot[b]]);
                rep = rep + red_rep[piv_slot[b]];
            }
        }
        if (r.is_zero()) {
            if (chain_out)
                for (int i = 0; i < nred; i++) chain_out->push_back(red[i]);
            return rep;
        }
        int p = -1;
        for (int b = n - 1; b >= 0; b--)
            if (r.get(b)) {
                p = b;
                break;
            }
        red[nred] = std::move(r);
        red_rep[nred] = rep;
        piv_slot[p] = nred;
        nred++;
        raw = a.mul_vec(raw);
    }
}

}  // namespace

std::pair<F2Poly, F2Poly> char_and_min_poly(const BitMatrix& a) {
    if (a.rows != a.cols) throw std::invalid_argument("char_and_min_poly: square matrix required");
    int n = a.rows;
    // characteristic polynomial: product of relative annihilators over a
    // chain of Krylov subspaces
    F2Poly cp = F2Poly::one();
    Echelon span(n);
    for (int t = 0; t < n && (int)span.size() < n; t++) {
        BitVec e(n);
        e.set(t, true);
        std::vector<BitVec> chain;
        F2Poly p = relative_min_poly(a, e, span, &chain);
        if (p.degree() <= 0) continue;
        cp = cp * p;
        for (auto& c : chain) span.add(std::move(c));
    }
    // minimal polynomial: lcm of the annihilators of the basis vectors
    F2Poly mp = F2Poly::one();
    Echelon empty(n);
    for (int t = 0; t < n; t++) {
        if (mp.degree() == n) break;
        BitVec e(n);
        e.set(t, true);
        mp = poly_lcm(mp, relative_min_poly(a, e, empty, nullptr));
    }
    return {cp, mp};
}

bool is_irreducible(const F2Poly& f) {
    int d = f.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    F2Poly x = F2Poly::x();
    // x^(2^d) == x mod f
    F2Poly t = poly_mod(x, f);
    for (int i = 0; i < d; i++) t = poly_mulmod(t, t, f);
    if (t != poly_mod(x, f)) return false;
    // no factor of degree d/p for prime p | d
    std::vector<uint64_t> ps = factor_u64((uint64_t)d);
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (uint64_t p : ps) {
        int k = d / (int)p;
        F2Poly u = poly_mod(x, f);
        for (int i = 0; i < k; i++) u = poly_mulmod(u, u, f);
        if (poly_gcd(u + poly_mod(x, f), f).degree() > 0) return false;
    }
    return true;
}

namespace {

F2Poly poly_sqrt(const F2Poly& f) {
    // valid when f has only even-degree terms (f' == 0)
    F2Poly g;
    for (int i = 0; i <= f.degree(); i += 2)
        if (f.coeff(i)) g.set_coeff(i / 2, true);
    return g;
}

void squarefree_decomp(const F2Poly& f, int mult,
                       std::vector<std::pair<F2Poly, int>>& out) {
    if (f.degree() <= 0) return;
    F2Poly fp = poly_derivative(f);
    if (fp.is_zero()) {
        squarefree_decomp(poly_sqrt(f), 2 * mult, out);
        return;
    }
    F2Poly c = poly_gcd(f, fp);
    F2Poly w = poly_div(f, c);
    int i = 1;
    while (w.degree() > 0) {
        F2Poly y = poly_gcd(w, c);
        F2Poly z = poly_div(w, y);
        if (z.degree() > 0) out.push_back({z, i * mult});
        w = y;
        c = poly_div(c, y);
        i++;
    }
    if (c.degree() > 0) squarefree_decomp(poly_sqrt(c), 2 * mult, out);
}

F2Poly random_poly_below(int deg, std::mt19937_64& rng) {
    F2Poly p;
    for (int i = 0; i < deg; i++)
        if (rng() & 1) p.set_coeff(i, true);
    return p;
}

void equal_degree_split(const F2Poly& g, int d, std::mt19937_64& rng,
                        std::vector<F2Poly>& out) {
    if (g.degree() == d) {
        out.push_back(g);
        return;
    }
    for (;;) {
        F2Poly r = random_poly_below(g.degree(), rng);
        if (r.is_zero()) continue;
        // absolute trace of r in each residue field F_{2^d}
        F2Poly trace, cur = r;
        for (int i = 0; i < d; i++) {
            trace = trace + cur;
            cur = poly_mulmod(cur, cur, g);
        }
        F2Poly u = poly_gcd(trace, g);
        if (u.degree() > 0 && u.degree() < g.degree()) {
            equal_degree_split(u, d, rng, out);
            equal_degree_split(poly_div(g, u), d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<F2Poly, int>> factor_poly(const F2Poly& f, uint64_t seed) {
    if (f.is_zero()) throw std::invalid_argument("factor_poly: zero polynomial");
    std::vector<std::pair<F2Poly, int>> sqfree;
    squarefree_decomp(f, 1, sqfree);
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
    std::vector<std::pair<F2Poly, int>> factors;
    for (auto& [g0, mult] : sqfree) {
        // distinct-degree separation
        F2Poly g = g0;
        F2Poly x = F2Poly::x();
        F2Poly h = poly_mod(x, g);
        int d = 0;
        while (g.degree() >= 2 * (d + 1)) {
            d++;
            h = poly_mulmod(h, h, g);
            F2Poly u = poly_gcd(h + poly_mod(x, g), g);
            if (u.degree() > 0) {
                std::vector<F2Poly> irr;
                equal_degree_split(u, d, rng, irr);
                for (auto& q : irr) factors.push_back({q, mult});
                g = poly_div(g, u);
                h = poly_mod(h, g);
            }
        }
        if (g.degree() > 0) factors.push_back({g, mult});
    }
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge equal factors (cannot happen from distinct squarefree parts of the
    // same multiplicity, but parts of different multiplicity share factors)
    std::vector<std::pair<F2Poly, int>> merged;
    for (auto& fm : factors) {
        if (!merged.empty() && merged.back().first == fm.first)
            merged.back().second += fm.second;
        else
            merged.push_back(fm);
    }
    return merged;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t acc = 1;
    a %= m;
    while (e) {
        if (e & 1) acc = mulmod_u64(acc, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return acc;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while (!(d & 1)) d >>= 1, s++;
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; i++) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

uint64_t pollard_rho(uint64_t n) {
    if (!(n & 1)) return 2;
    std::mt19937_64 rng(0xdecafbadULL ^ n);
    while (true) {
        uint64_t x = rng() % n, c = rng() % n + 1, y = x, d = 1;
        auto f = [&](uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(uint64_t m, std::vector<uint64_t>& out) {
    if (m == 1) return;
    if (is_prime_u64(m)) {
        out.push_back(m);
        return;
    }
    for (uint64_t p = 2; p < 100000 && p * p <= m; p = (p == 2 ? 3 : p + 2)) {
        if (m % p == 0) {
            out.push_back(p);
            factor_rec(m / p, out);
            return;
        }
    }
    uint64_t d = pollard_rho(m);
    factor_rec(d, out);
    factor_rec(m / d, out);
}

}  // namespace

std::vector<uint64_t> factor_u64(uint64_t m) {
    std::vector<uint64_t> out;
    factor_rec(m, out);
    std::sort(out.begin(), out.end());
    return out;
}

F2Poly find_primitive_poly(int n) {
    if (n < 1 || n > 63) throw std::invalid_argument("find_primitive_poly: need 1 <= n <= 63");
    if (n == 1) {
        F2Poly f;
        f.set_coeff(0, true);
        f.set_coeff(1, true);
        return f;  // x + 1; the order of x is 1 = 2^1 - 1
    }
    uint64_t m = (uint64_t(1) << n) - 1;
    std::vector<uint64_t> primes = factor_u64(m);
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    F2Poly x = F2Poly::x();
    for (uint64_t mid = 0; mid < (uint64_t(1) << (n - 1)); mid++) {
        uint64_t word = 1 | (mid << 1) | (uint64_t(1) << n);
        F2Poly f = F2Poly::from_coeff_word(word);
        if (!is_irreducible(f)) continue;
        bool primitive = true;
        for (uint64_t p : primes) {
            if (poly_powmod(x, m / p, f) == F2Poly::one()) {
                primitive = false;
                break;
            }
        }
        if (primitive) return f;
    }
    throw std::logic_error("find_primitive_poly: none found");
}

}  // namespace ctrlsyn::gf2
