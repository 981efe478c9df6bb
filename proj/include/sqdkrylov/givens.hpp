#pragma once

#include <cmath>

namespace sqd {

// Symmetric plane reflection [c s; s -c] with c² + s² = 1.
struct GivensPair {
    double c = 1.0;
    double s = 0.0;
};

struct SymGivens {
    GivensPair rot;
    double r = 0.0; // sqrt(a² + b²)
};

// Reflection mapping (a, b) to (r, 0): c·a + s·b = r, s·a - c·b = 0.
// (0, 0) maps to (c, s, r) = (1, 0, 0).
inline SymGivens sym_givens(double a, double b) {
    SymGivens g;
    g.r = std::hypot(a, b);
    if (g.r > 0.0) {
        g.rot.c = a / g.r;
        g.rot.s = b / g.r;
    }
    return g;
}

} // namespace sqd
