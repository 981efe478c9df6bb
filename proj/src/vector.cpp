#include "sqdkrylov/vector.hpp"

namespace sqd {

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ShapeError("dot: length mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw ShapeError("axpy: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
    for (double& v : x) v *= alpha;
}

bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_zero(std::span<const double> x) {
    for (double v : x)
        if (v != 0.0) return false;
    return true;
}

} // namespace sqd
