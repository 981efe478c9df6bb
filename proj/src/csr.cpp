#include "sqdkrylov/csr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqdkrylov/errors.hpp"

namespace sqd {

CsrMatrix::CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
                     std::vector<std::size_t> col_indices, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)), values_(std::move(values)) {
    if (nrows_ == 0 || ncols_ == 0) throw ShapeError("CsrMatrix: dimensions must be positive");
    if (row_offsets_.size() != nrows_ + 1 || row_offsets_.front() != 0 ||
        row_offsets_.back() != values_.size() || col_indices_.size() != values_.size())
        throw ShapeError("CsrMatrix: inconsistent CSR arrays");
    for (std::size_t i = 0; i < nrows_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1])
            throw ShapeError("CsrMatrix: row offsets not monotone");
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            if (col_indices_[p] >= ncols_)
                throw ShapeError("CsrMatrix: column index out of range");
            if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])
                throw ShapeError("CsrMatrix: column indices not strictly increasing in row " +
                                 std::to_string(i));
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                   std::vector<Triplet> entries) {
    if (nrows == 0 || ncols == 0) throw ShapeError("CsrMatrix: dimensions must be positive");
    for (const Triplet& t : entries)
        if (t.row >= nrows || t.col >= ncols)
            throw ShapeError("CsrMatrix: triplet index out of range");
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    std::vector<std::size_t> offs(nrows + 1, 0), cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
            vals.back() += entries[i].value; // duplicates are summed
        } else {
            cols.push_back(entries[i].col);
            vals.push_back(entries[i].value);
            offs[entries[i].row + 1]++;
        }
    }
    for (std::size_t i = 0; i < nrows; ++i) offs[i + 1] += offs[i];
    return CsrMatrix(nrows, ncols, std::move(offs), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& a, double drop_tol) {
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > drop_tol) entries.push_back({i, j, a(i, j)});
    return from_triplets(a.rows(), a.cols(), std::move(entries));
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != ncols_ || y.size() != nrows_) throw ShapeError("CsrMatrix::multiply: shape");
    for (std::size_t i = 0; i < nrows_; ++i) {
        double s = 0.0;
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
            s += values_[p] * x[col_indices_[p]];
        y[i] = s;
    }
}

void CsrMatrix::multiply_accumulate(std::span<const double> x, double gamma,
                                    std::span<double> y) const {
    if (x.size() != ncols_ || y.size() != nrows_)
        throw ShapeError("CsrMatrix::multiply_accumulate: shape");
    for (std::size_t i = 0; i < nrows_; ++i) {
        double s = 0.0;
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
            s += values_[p] * x[col_indices_[p]];
        y[i] = s + gamma * y[i];
    }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
    if (x.size() != nrows_ || y.size() != ncols_)
        throw ShapeError("CsrMatrix::multiply_transpose: shape");
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < nrows_; ++i)
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
            y[col_indices_[p]] += values_[p] * x[i];
}

void CsrMatrix::multiply_transpose_accumulate(std::span<const double> x, double beta,
                                              std::span<double> y) const {
    if (x.size() != nrows_ || y.size() != ncols_)
        throw ShapeError("CsrMatrix::multiply_transpose_accumulate: shape");
    scale(beta, y);
    for (std::size_t i = 0; i < nrows_; ++i)
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
            y[col_indices_[p]] += values_[p] * x[i];
}

DenseMatrix CsrMatrix::to_dense() const {
    DenseMatrix d(nrows_, ncols_);
    for (std::size_t i = 0; i < nrows_; ++i)
        for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
            d(i, col_indices_[p]) = values_[p];
    return d;
}

} // namespace sqd
