#pragma once

#include <cstddef>

#include "sqdkrylov/problem.hpp"

namespace sqd {

// View of the block problem as one symmetric system of size m+n with the
// block-diagonal preconditioner built from the same M⁻¹/N⁻¹ actions. The
// full-matrix action needs the forward maps M and N, so the preconditioner
// operators must be invertible handles.
class FullSystemView {
public:
    explicit FullSystemView(const SqdProblem& problem);

    std::size_t dim() const { return m_ + n_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }

    // y = K x with K = [tau·M, A; Aᵀ, nu·N]
    void apply_k(std::span<const double> x, std::span<double> y) const;
    // y = H⁻¹ x with H = blkdiag(M, N)
    void apply_hinv(std::span<const double> x, std::span<double> y) const;

    DenseVector rhs() const; // (b, c)

private:
    const SqdProblem* p_;
    std::size_t m_, n_;
};

// Preconditioned minimum-residual baseline on the full system. Residual
// history is reported in the H⁻¹ norm, matching the block solvers.
SolveReport minres_solve(const FullSystemView& view, const SolverOptions& opts = {});

// Preconditioned SYMMLQ baseline. At each iteration the Galerkin (conjugate
// gradient) point is reported whenever its transfer is well defined;
// otherwise the minimum-norm point of the iteration is reported.
SolveReport symmlq_solve(const FullSystemView& view, const SolverOptions& opts = {});

} // namespace sqd
