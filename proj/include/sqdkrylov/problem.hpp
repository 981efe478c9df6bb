#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "sqdkrylov/operators.hpp"
#include "sqdkrylov/vector.hpp"

namespace sqd {

// The block system
//
//   [ tau·M    A   ] [x]   [b]
//   [  Aᵀ    nu·N  ] [y] = [c]
//
// with M, N symmetric positive definite, supplied through their inverse
// actions only. (tau, nu) = (+1, -1) is the quasi-definite case; nu = 0 is
// the saddle-point case and is accepted by trimr_solve only.
struct SqdProblem {
    OperatorPtr A;    // m×n, any shape
    OperatorPtr Minv; // m×m SPD action
    OperatorPtr Ninv; // n×n SPD action
    DenseVector b;    // length m
    DenseVector c;    // length n
    int tau = +1;     // {+1, -1}
    int nu = -1;      // {+1, 0, -1}

    std::size_t m() const { return A ? A->nrows() : 0; }
    std::size_t n() const { return A ? A->ncols() : 0; }

    // Throws ShapeError / std::invalid_argument when fields are inconsistent.
    void validate() const;
};

struct SolverOptions {
    double atol = 1e-12;
    double rtol = 1e-10;
    std::size_t max_iterations = 0; // 0 means 2(m+n)
    bool explicit_residual = false; // recompute residual norms from scratch each iteration
    // beta/gamma are treated as zero below factor·(initial beta/gamma).
    double breakdown_tol_factor = 1.4901161193847656e-08; // sqrt(machine eps)

    std::size_t resolve_max_iterations(std::size_t m, std::size_t n) const {
        return max_iterations > 0 ? max_iterations : 2 * (m + n);
    }
};

enum class SolveStatus { converged, max_iterations, breakdown_terminated, error };

const char* to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::error;
    std::size_t iterations = 0;
    DenseVector residual_history; // ‖r_k‖_{H⁻¹}, k = 0..iterations
    DenseVector x;
    DenseVector y;
    std::chrono::duration<double> elapsed{0.0};
    std::string message;
};

// ‖r₀‖_{H⁻¹} for the zero initial guess.
double initial_residual_norm(double beta1, double gamma1);

// true iff rnorm ≤ atol + ‖(b,c)‖_{H⁻¹}·rtol, where ‖(b,c)‖_{H⁻¹} =
// sqrt(beta1² + gamma1²). The comparison is inclusive.
bool stopping_check(double rnorm, double beta1, double gamma1, const SolverOptions& opts);

} // namespace sqd
