#pragma once

#include <memory>
#include <span>

#include "sqdkrylov/csr.hpp"
#include "sqdkrylov/dense.hpp"
#include "sqdkrylov/vector.hpp"

namespace sqd {

// Abstract real linear map with forward and adjoint actions. Instances are
// immutable after construction; apply methods are reentrant and may be shared
// across threads.
//
// Preconditioner slots hold operators that act as an inverse (M⁻¹, N⁻¹).
// When the underlying matrix action itself is also cheap to apply, the
// operator advertises it through invertible()/apply_inverse(); explicit
// residual evaluation and the error metric require it.
class LinearOperator {
public:
    LinearOperator(std::size_t nrows, std::size_t ncols, bool symmetric)
        : nrows_(nrows), ncols_(ncols), symmetric_(symmetric) {}
    virtual ~LinearOperator() = default;

    std::size_t nrows() const { return nrows_; }
    std::size_t ncols() const { return ncols_; }
    bool symmetric() const { return symmetric_; }

    // y = A x
    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

    // y = Aᵀ x. Defaults to apply() for symmetric operators.
    virtual void apply_adjoint(std::span<const double> x, std::span<double> y) const;

    // y ← A x + gamma·y (in-place gemv form; default goes through a temporary)
    virtual void apply_accumulate(std::span<const double> x, double gamma,
                                  std::span<double> y) const;

    // y ← Aᵀ x + beta·y
    virtual void apply_adjoint_accumulate(std::span<const double> x, double beta,
                                          std::span<double> y) const;

    // Whether apply_inverse is available (i.e. the map the operator inverts
    // can be applied directly).
    virtual bool invertible() const { return false; }
    virtual void apply_inverse(std::span<const double> x, std::span<double> y) const;

    virtual bool is_identity() const { return false; }

    // Value-returning forward and adjoint actions.
    DenseVector forward(std::span<const double> x) const;
    DenseVector adjoint(std::span<const double> y) const;

protected:
    void check_apply_shapes(std::span<const double> x, std::span<double> y) const;
    void check_adjoint_shapes(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t nrows_, ncols_;
    bool symmetric_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

// Zero-cost identity, used when M or N is the identity so that no triangular
// solves or copies are spent on preconditioning.
class IdentityOperator final : public LinearOperator {
public:
    explicit IdentityOperator(std::size_t n) : LinearOperator(n, n, true) {}
    void apply(std::span<const double> x, std::span<double> y) const override;
    bool invertible() const override { return true; }
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;
    bool is_identity() const override { return true; }
};

// SPD diagonal map. Commonly holds M⁻¹ for a diagonal M; the inverse action
// is the reciprocal diagonal.
class DiagonalOperator final : public LinearOperator {
public:
    explicit DiagonalOperator(DenseVector diagonal);
    void apply(std::span<const double> x, std::span<double> y) const override;
    bool invertible() const override { return true; }
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;
    const DenseVector& diagonal() const { return diag_; }

private:
    DenseVector diag_;
};

// Sparse matrix operator; adjoint products run as a row scan of the same
// storage, so no transpose copy is kept.
class CsrOperator final : public LinearOperator {
public:
    explicit CsrOperator(CsrMatrix a, bool symmetric = false)
        : LinearOperator(a.nrows(), a.ncols(), symmetric), a_(std::move(a)) {}
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_adjoint(std::span<const double> x, std::span<double> y) const override;
    void apply_accumulate(std::span<const double> x, double gamma,
                          std::span<double> y) const override;
    void apply_adjoint_accumulate(std::span<const double> x, double beta,
                                  std::span<double> y) const override;
    const CsrMatrix& matrix() const { return a_; }

private:
    CsrMatrix a_;
};

// Dense matrix operator (small/test-scale problems and assembled oracles).
class DenseOperator final : public LinearOperator {
public:
    explicit DenseOperator(DenseMatrix a, bool symmetric = false)
        : LinearOperator(a.rows(), a.cols(), symmetric), a_(std::move(a)) {}
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_adjoint(std::span<const double> x, std::span<double> y) const override;
    const DenseMatrix& matrix() const { return a_; }

private:
    DenseMatrix a_;
};

// Action of M⁻¹ for a dense SPD matrix M, realized as two triangular solves
// against the Cholesky factor. The forward map M x is also available through
// apply_inverse (M x = L (Lᵀ x)).
class SpdInverse final : public LinearOperator {
public:
    // Factor is lower-triangular with strictly positive diagonal.
    explicit SpdInverse(DenseMatrix lower_factor);

    void apply(std::span<const double> x, std::span<double> y) const override;
    bool invertible() const override { return true; }
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;

    std::size_t dimension() const { return factor_.rows(); }
    const DenseMatrix& factor() const { return factor_; }

private:
    DenseMatrix factor_;
};

// Cholesky-factorizes a dense symmetric matrix and wraps it as the operator
// that applies its inverse. Throws NotSpdError on a non-positive pivot and
// ShapeError if the matrix is not symmetric within 1e-12 relative.
std::shared_ptr<SpdInverse> spd_inverse_from_dense(const DenseMatrix& m);

// Lower Cholesky factor of a dense SPD matrix. Throws NotSpdError when a
// pivot is non-positive.
DenseMatrix cholesky_lower(const DenseMatrix& m);

} // namespace sqd
