#include "sqdkrylov/dense.hpp"

#include "sqdkrylov/errors.hpp"

namespace sqd {

DenseVector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw ShapeError("matvec: shape");
    DenseVector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseVector matvec_transpose(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.rows()) throw ShapeError("matvec_transpose: shape");
    DenseVector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
    return y;
}

} // namespace sqd
