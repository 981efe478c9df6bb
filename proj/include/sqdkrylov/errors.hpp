#pragma once

#include <stdexcept>
#include <string>

namespace sqd {

// Dimension or length mismatch between operands.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix or operator expected to be symmetric positive definite is not.
class NotSpdError : public std::runtime_error {
public:
    explicit NotSpdError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (e.g. unsupported Matrix Market header).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A factorization pivot fell below tolerance; signals invalid problem data.
class PivotError : public std::runtime_error {
public:
    explicit PivotError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sqd
