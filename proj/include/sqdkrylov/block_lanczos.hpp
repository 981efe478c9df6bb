#pragma once

#include <cstddef>
#include <vector>

#include "sqdkrylov/dense.hpp"
#include "sqdkrylov/operators.hpp"

namespace sqd {

// Dense basis produced by the block process with block size 2. Reference
// implementation for cross-checking the streaming tridiagonalization; meant
// for test-scale dimensions only.
struct BlockLanczosBasis {
    // Basis columns w_1..w_{completed+1} side by side ((m+n) × 2(completed+1));
    // the final pair is present only when no breakdown occurred.
    DenseMatrix w;
    std::vector<DenseMatrix> omegas; // 2×2 projections, one per completed step
    std::vector<DenseMatrix> psis;   // 2×2 couplings, psi_1 first
    std::size_t completed = 0;       // steps with an omega block
    bool breakdown = false;          // rank collapse in a residual block
};

// Runs the block process on symmetric K with starting block B ((m+n)×2) and
// SPD preconditioner given through its inverse action. Each new block is
// orthonormalized in the H-inner product by Gram-Schmidt with a positive
// diagonal (so psi_kᵀ is upper triangular with nonnegative diagonal).
BlockLanczosBasis block_lanczos_reference(const LinearOperator& k_op, const DenseMatrix& b_block,
                                          const LinearOperator& hinv, std::size_t steps);

} // namespace sqd
