#pragma once

#include <vector>

#include "ctrlsyn/gf2.hpp"

namespace ctrlsyn::jordan {

// Basis change S with S*A*S_inv equal to a block diagonal of companion
// matrices of prime-power polynomials (the elementary divisors of A).
struct JordanDecomposition {
    int n = 0;
    gf2::BitMatrix S, S_inv;
    std::vector<gf2::F2Poly> blocks;                      // f_i = q_i^{k_i}
    std::vector<std::pair<gf2::F2Poly, int>> block_parts;  // (q_i, k_i)

    gf2::BitMatrix block_diagonal() const;
    std::vector<int> block_offsets() const;  // start index of each block
};

struct BlockStats {
    int c = 0;        // blocks with f = (x+1)^d
    int c_prime = 0;  // 1x1 identity blocks, f = x+1
    int lambda = 0;   // dim of the eigenvalue-one eigenspace = nullity(A+I)
};

// Requires A square and invertible. Blocks are sorted by (q, k) with
// polynomials ordered by (degree, coefficient bits); the cyclic-vector
// search is deterministic, so S is reproducible.
JordanDecomposition generalized_jordan(const gf2::BitMatrix& a);

// Counts c and c' from the blocks and computes lambda independently as
// nullity(A+I); the Lemma that lambda = c is asserted, not assumed.
BlockStats block_stats(const JordanDecomposition& j, const gf2::BitMatrix& a);

}  // namespace ctrlsyn::jordan
