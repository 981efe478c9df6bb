#pragma once

#include <cstddef>

#include "sqdkrylov/problem.hpp"
#include "sqdkrylov/ssy.hpp"

namespace sqd {

// Per-solve state of the Galerkin method: the running LDLᵀ factorization of
// the projected system, the forward-substitution coefficients, the two
// direction slots per side and the current iterate. Single-owner mutable;
// one instance per solve.
//
// The factorization scalars follow the 2×2-block structure of the projected
// matrix: d's are the diagonal of D, delta the within-block coupling of L,
// (sigma, eta, lambda) the between-block couplings.
class TriCgWorkspace {
public:
    TriCgWorkspace(std::size_t m, std::size_t n);

    std::size_t k() const { return k_; }

    // Advances the factorization by one block column using alpha_k, beta_k,
    // gamma_k. Throws PivotError when a pivot falls below tolerance (cannot
    // happen for genuinely quasi-definite data).
    void ldlt_step(double alpha_k, double beta_k, double gamma_k);

    // Forward-substitution update for the projected right-hand side
    // (beta1, gamma1, 0, ...): two new coefficients per iteration.
    void pi_update(double beta1, double gamma1);

    // Direction recursions and the iterate update from v_k, u_k.
    void direction_update(const DenseVector& v_k, const DenseVector& u_k);

    // ‖r_k‖_{H⁻¹} by recurrence, valid after the k-th pi_update.
    double residual_norm(double beta_next, double gamma_next) const;

    const DenseVector& x() const { return x_; }
    const DenseVector& y() const { return y_; }
    DenseVector take_x() { return std::move(x_); }
    DenseVector take_y() { return std::move(y_); }

    // Factorization state, exposed for verification.
    double d_odd() const { return d_odd_; }   // d_{2k-1}
    double d_even() const { return d_even_; } // d_{2k}
    double delta() const { return delta_; }
    double sigma() const { return sigma_; }
    double eta() const { return eta_; }
    double lambda() const { return lambda_; }
    double pi_odd() const { return pi_odd_; }
    double pi_even() const { return pi_even_; }

    // Allocation census (workspace side only; the process adds its own).
    std::size_t persistent_m_vectors() const { return 3; } // x and two direction slots
    std::size_t persistent_n_vectors() const { return 3; }

private:
    std::size_t k_ = 0;
    // d_{2k-3}, d_{2k-2} carried between iterations.
    double d_prevprev_ = 0.0, d_prev_ = 0.0;
    double d_odd_ = 0.0, d_even_ = 0.0;
    double delta_ = 0.0;
    double sigma_ = 0.0, eta_ = 0.0, lambda_ = 0.0;
    double pi_prevprev_ = 0.0, pi_prev_ = 0.0;
    double pi_odd_ = 0.0, pi_even_ = 0.0;
    double pivot_scale_ = 1.0;

    // Direction history slots; after iteration k they hold the odd/even pair.
    DenseVector gx_odd_, gx_even_, gy_odd_, gy_even_;
    DenseVector x_, y_;
};

// Galerkin solver for the quasi-definite case (tau, nu) = (+1, -1). Starts
// from the zero iterate; the residual history begins at ‖r₀‖_{H⁻¹}.
SolveReport tricg_solve(const SqdProblem& problem, const SolverOptions& opts = {});

// Indefinite error metric e_rᵀ K e_r with e_r = (x*-x, y*-y). Diagnostic;
// requires preconditioner operators that expose the forward maps M and N.
double error_metric(const SqdProblem& problem, const DenseVector& x, const DenseVector& y,
                    const DenseVector& x_star, const DenseVector& y_star);

// ‖r_k‖_{H⁻¹} recomputed from scratch at (x, y). Requires forward-capable
// preconditioner operators.
double explicit_residual_norm(const SqdProblem& problem, const DenseVector& x,
                              const DenseVector& y);

} // namespace sqd
