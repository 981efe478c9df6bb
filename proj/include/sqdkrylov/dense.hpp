#pragma once

#include <cstddef>
#include <vector>

#include "sqdkrylov/vector.hpp"

namespace sqd {

// Row-major dense matrix. Minimal: we only need it for small factor/oracle
// blocks (preconditioner factors, block-Lanczos bases, assembled projections).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// y = A x
DenseVector matvec(const DenseMatrix& a, std::span<const double> x);

// y = Aᵀ x
DenseVector matvec_transpose(const DenseMatrix& a, std::span<const double> y);

} // namespace sqd
