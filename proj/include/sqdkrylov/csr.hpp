#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sqdkrylov/dense.hpp"
#include "sqdkrylov/vector.hpp"

namespace sqd {

// Compressed sparse row matrix. Column indices are strictly increasing within
// each row; duplicate triplets are summed at construction.
class CsrMatrix {
public:
    struct Triplet {
        std::size_t row, col;
        double value;
    };

    CsrMatrix() = default;

    // Takes pre-assembled CSR arrays; validates the structural invariants.
    CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
              std::vector<std::size_t> col_indices, std::vector<double> values);

    static CsrMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                   std::vector<Triplet> entries);

    static CsrMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0);

    std::size_t nrows() const { return nrows_; }
    std::size_t ncols() const { return ncols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::size_t>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

    // y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    // y = alpha·A x + gamma·y
    void multiply_accumulate(std::span<const double> x, double gamma, std::span<double> y) const;
    // y = Aᵀ x, by a row scan (no stored transpose)
    void multiply_transpose(std::span<const double> x, std::span<double> y) const;
    // y = Aᵀ x + beta·y
    void multiply_transpose_accumulate(std::span<const double> x, double beta,
                                       std::span<double> y) const;

    DenseMatrix to_dense() const;

private:
    std::size_t nrows_ = 0, ncols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

} // namespace sqd
