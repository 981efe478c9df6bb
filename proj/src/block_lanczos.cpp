#include "sqdkrylov/block_lanczos.hpp"

#include <cmath>
#include <utility>

#include "sqdkrylov/errors.hpp"

namespace sqd {

namespace {

struct Pair {
    // A block column in both representations: z = H·w and w itself.
    DenseVector z0, z1; // unpreconditioned columns
    DenseVector w0, w1; // preconditioned columns
};

constexpr double kRankTol = 1e-13;

// H-orthonormalizes the pair (z = H-side, w = H⁻¹ z side) in place and
// returns psiᵀ (upper triangular, nonnegative diagonal) such that the input
// block equals w_new·psiᵀ. Returns false on rank collapse.
bool block_qr(Pair& p, DenseMatrix& psi_t, double scale_ref) {
    psi_t = DenseMatrix(2, 2);
    double r00 = std::sqrt(std::max(0.0, dot(p.z0, p.w0)));
    if (r00 <= kRankTol * scale_ref) return false;
    scale(1.0 / r00, p.z0);
    scale(1.0 / r00, p.w0);
    double r01 = dot(p.z0, p.w1);
    // In exact arithmetic z0ᵀw1 == w0ᵀz1; average the two one-sided forms to
    // keep the subtraction consistent between the z and w copies.
    r01 = 0.5 * (r01 + dot(p.w0, p.z1));
    axpy(-r01, p.z0, p.z1);
    axpy(-r01, p.w0, p.w1);
    double r11 = std::sqrt(std::max(0.0, dot(p.z1, p.w1)));
    if (r11 <= kRankTol * scale_ref) return false;
    scale(1.0 / r11, p.z1);
    scale(1.0 / r11, p.w1);
    psi_t(0, 0) = r00;
    psi_t(0, 1) = r01;
    psi_t(1, 1) = r11;
    return true;
}

} // namespace

BlockLanczosBasis block_lanczos_reference(const LinearOperator& k_op, const DenseMatrix& b_block,
                                          const LinearOperator& hinv, std::size_t steps) {
    const std::size_t dim = k_op.nrows();
    if (k_op.ncols() != dim || hinv.nrows() != dim || hinv.ncols() != dim)
        throw ShapeError("block_lanczos_reference: operators must be square and same size");
    if (b_block.rows() != dim || b_block.cols() != 2)
        throw ShapeError("block_lanczos_reference: starting block must be dim×2");

    BlockLanczosBasis out;

    auto column = [](const DenseMatrix& m, std::size_t j) {
        DenseVector v(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
        return v;
    };

    Pair curr;
    curr.z0 = column(b_block, 0);
    curr.z1 = column(b_block, 1);
    curr.w0.assign(dim, 0.0);
    curr.w1.assign(dim, 0.0);
    hinv.apply(curr.z0, curr.w0);
    hinv.apply(curr.z1, curr.w1);

    const double scale_ref =
        std::max({1.0, norm2(curr.z0) * norm2(curr.w0), norm2(curr.z1) * norm2(curr.w1)});

    DenseMatrix psi_t;
    if (!block_qr(curr, psi_t, scale_ref)) {
        out.breakdown = true;
        return out;
    }
    {
        DenseMatrix psi(2, 2);
        psi(0, 0) = psi_t(0, 0);
        psi(0, 1) = psi_t(1, 0);
        psi(1, 0) = psi_t(0, 1);
        psi(1, 1) = psi_t(1, 1);
        out.psis.push_back(psi);
    }

    std::vector<Pair> kept;
    kept.push_back(curr);
    Pair prev; // w_{k-1} pair; empty at the first step
    DenseMatrix psi_prev = out.psis.back();

    for (std::size_t step = 1; step <= steps; ++step) {
        // omega_k = w_kᵀ K w_k
        DenseVector kw0(dim), kw1(dim);
        k_op.apply(curr.w0, kw0);
        k_op.apply(curr.w1, kw1);
        DenseMatrix omega(2, 2);
        omega(0, 0) = dot(curr.w0, kw0);
        omega(0, 1) = dot(curr.w0, kw1);
        omega(1, 0) = dot(curr.w1, kw0);
        omega(1, 1) = dot(curr.w1, kw1);
        out.omegas.push_back(omega);
        out.completed = step;

        // Residual block: K w_k - H w_k omega_k - H w_{k-1} psi_k
        Pair next;
        next.z0 = kw0;
        next.z1 = kw1;
        axpy(-omega(0, 0), curr.z0, next.z0);
        axpy(-omega(1, 0), curr.z1, next.z0);
        axpy(-omega(0, 1), curr.z0, next.z1);
        axpy(-omega(1, 1), curr.z1, next.z1);
        if (!prev.z0.empty()) {
            axpy(-psi_prev(0, 0), prev.z0, next.z0);
            axpy(-psi_prev(1, 0), prev.z1, next.z0);
            axpy(-psi_prev(0, 1), prev.z0, next.z1);
            axpy(-psi_prev(1, 1), prev.z1, next.z1);
        }
        next.w0.assign(dim, 0.0);
        next.w1.assign(dim, 0.0);
        hinv.apply(next.z0, next.w0);
        hinv.apply(next.z1, next.w1);

        if (!block_qr(next, psi_t, scale_ref)) {
            out.breakdown = true;
            break;
        }
        DenseMatrix psi(2, 2);
        psi(0, 0) = psi_t(0, 0);
        psi(0, 1) = psi_t(1, 0);
        psi(1, 0) = psi_t(0, 1);
        psi(1, 1) = psi_t(1, 1);
        out.psis.push_back(psi);
        psi_prev = psi;

        prev = std::move(curr);
        curr = next;
        kept.push_back(curr);
    }

    out.w = DenseMatrix(dim, 2 * kept.size());
    for (std::size_t b = 0; b < kept.size(); ++b)
        for (std::size_t i = 0; i < dim; ++i) {
            out.w(i, 2 * b) = kept[b].w0[i];
            out.w(i, 2 * b + 1) = kept[b].w1[i];
        }
    return out;
}

} // namespace sqd
