#include "sqdkrylov/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqdkrylov/errors.hpp"

namespace sqd {

void LinearOperator::check_apply_shapes(std::span<const double> x, std::span<double> y) const {
    if (x.size() != ncols_ || y.size() != nrows_)
        throw ShapeError("operator apply: expected input " + std::to_string(ncols_) +
                         ", output " + std::to_string(nrows_) + "; got input " +
                         std::to_string(x.size()) + ", output " + std::to_string(y.size()));
}

void LinearOperator::check_adjoint_shapes(std::span<const double> x, std::span<double> y) const {
    if (x.size() != nrows_ || y.size() != ncols_)
        throw ShapeError("operator adjoint apply: expected input " + std::to_string(nrows_) +
                         ", output " + std::to_string(ncols_) + "; got input " +
                         std::to_string(x.size()) + ", output " + std::to_string(y.size()));
}

void LinearOperator::apply_adjoint(std::span<const double> x, std::span<double> y) const {
    if (!symmetric_)
        throw ShapeError("operator has no adjoint implementation and is not symmetric");
    apply(x, y);
}

void LinearOperator::apply_accumulate(std::span<const double> x, double gamma,
                                      std::span<double> y) const {
    check_apply_shapes(x, y);
    DenseVector t(nrows_);
    apply(x, t);
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = t[i] + gamma * y[i];
}

void LinearOperator::apply_adjoint_accumulate(std::span<const double> x, double beta,
                                              std::span<double> y) const {
    check_adjoint_shapes(x, y);
    DenseVector t(ncols_);
    apply_adjoint(x, t);
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = t[i] + beta * y[i];
}

void LinearOperator::apply_inverse(std::span<const double>, std::span<double>) const {
    throw ShapeError("operator does not expose the forward map it inverts");
}

DenseVector LinearOperator::forward(std::span<const double> x) const {
    DenseVector y(nrows_);
    apply(x, y);
    return y;
}

DenseVector LinearOperator::adjoint(std::span<const double> y_in) const {
    DenseVector y(ncols_);
    apply_adjoint(y_in, y);
    return y;
}

void IdentityOperator::apply(std::span<const double> x, std::span<double> y) const {
    check_apply_shapes(x, y);
    std::copy(x.begin(), x.end(), y.begin());
}

void IdentityOperator::apply_inverse(std::span<const double> x, std::span<double> y) const {
    apply(x, y);
}

DiagonalOperator::DiagonalOperator(DenseVector diagonal)
    : LinearOperator(diagonal.size(), diagonal.size(), true), diag_(std::move(diagonal)) {
    for (double d : diag_)
        if (!(d > 0.0)) throw NotSpdError("DiagonalOperator: diagonal entries must be positive");
}

void DiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
    check_apply_shapes(x, y);
    for (std::size_t i = 0; i < diag_.size(); ++i) y[i] = diag_[i] * x[i];
}

void DiagonalOperator::apply_inverse(std::span<const double> x, std::span<double> y) const {
    check_apply_shapes(x, y);
    for (std::size_t i = 0; i < diag_.size(); ++i) y[i] = x[i] / diag_[i];
}

void CsrOperator::apply(std::span<const double> x, std::span<double> y) const {
    a_.multiply(x, y);
}

void CsrOperator::apply_adjoint(std::span<const double> x, std::span<double> y) const {
    a_.multiply_transpose(x, y);
}

void CsrOperator::apply_accumulate(std::span<const double> x, double gamma,
                                   std::span<double> y) const {
    a_.multiply_accumulate(x, gamma, y);
}

void CsrOperator::apply_adjoint_accumulate(std::span<const double> x, double beta,
                                           std::span<double> y) const {
    a_.multiply_transpose_accumulate(x, beta, y);
}

void DenseOperator::apply(std::span<const double> x, std::span<double> y) const {
    check_apply_shapes(x, y);
    DenseVector t = matvec(a_, x);
    std::copy(t.begin(), t.end(), y.begin());
}

void DenseOperator::apply_adjoint(std::span<const double> x, std::span<double> y) const {
    check_adjoint_shapes(x, y);
    DenseVector t = matvec_transpose(a_, x);
    std::copy(t.begin(), t.end(), y.begin());
}

SpdInverse::SpdInverse(DenseMatrix lower_factor)
    : LinearOperator(lower_factor.rows(), lower_factor.rows(), true),
      factor_(std::move(lower_factor)) {
    if (factor_.rows() != factor_.cols()) throw ShapeError("SpdInverse: factor must be square");
    for (std::size_t i = 0; i < factor_.rows(); ++i)
        if (!(factor_(i, i) > 0.0))
            throw NotSpdError("SpdInverse: factor diagonal must be strictly positive");
}

void SpdInverse::apply(std::span<const double> x, std::span<double> y) const {
    check_apply_shapes(x, y);
    const std::size_t n = factor_.rows();
    // L z = x
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= factor_(i, j) * y[j];
        y[i] = s / factor_(i, i);
    }
    // Lᵀ y = z
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= factor_(j, ii) * y[j];
        y[ii] = s / factor_(ii, ii);
    }
}

void SpdInverse::apply_inverse(std::span<const double> x, std::span<double> y) const {
    check_apply_shapes(x, y);
    const std::size_t n = factor_.rows();
    // y = L (Lᵀ x)
    DenseVector t(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = i; j < n; ++j) s += factor_(j, i) * x[j];
        t[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += factor_(i, j) * t[j];
        y[i] = s;
    }
}

DenseMatrix cholesky_lower(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("cholesky_lower: matrix must be square");
    const std::size_t n = m.rows();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
        if (!(d > 0.0)) throw NotSpdError("matrix not SPD: non-positive pivot at index " +
                                          std::to_string(j));
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

std::shared_ptr<SpdInverse> spd_inverse_from_dense(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ShapeError("spd_inverse_from_dense: matrix must be square and nonempty");
    double scale = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
            scale = std::max(scale, std::abs(m(i, j)));
        }
    for (std::size_t i = 0; i < m.rows(); ++i) scale = std::max(scale, std::abs(m(i, i)));
    if (asym > 1e-12 * std::max(1.0, scale))
        throw ShapeError("spd_inverse_from_dense: matrix is not symmetric");
    return std::make_shared<SpdInverse>(cholesky_lower(m));
}

} // namespace sqd
