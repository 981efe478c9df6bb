#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sqdkrylov/errors.hpp"

namespace sqd {

using DenseVector = std::vector<double>;

// xᵀy. Lengths must agree.
double dot(std::span<const double> x, std::span<const double> y);

// Euclidean norm.
double norm2(std::span<const double> x);

// y ← y + alpha·x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// x ← alpha·x
void scale(double alpha, std::span<double> x);

// true iff every entry is finite (no NaN/Inf).
bool all_finite(std::span<const double> x);

// true iff every entry is exactly zero.
bool all_zero(std::span<const double> x);

inline DenseVector zeros(std::size_t n) { return DenseVector(n, 0.0); }

inline DenseVector ones(std::size_t n) { return DenseVector(n, 1.0); }

} // namespace sqd
