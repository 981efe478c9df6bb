#pragma once

#include <cstddef>
#include <vector>

#include "sqdkrylov/dense.hpp"
#include "sqdkrylov/problem.hpp"

namespace sqd {

// Scalars produced by the tridiagonalization: the entries of T_k and of its
// one-row/one-column extensions.
struct SsyCoefficients {
    std::vector<double> alphas; // alpha_1, alpha_2, ...
    std::vector<double> betas;  // beta_1 first
    std::vector<double> gammas; // gamma_1 first
};

struct SsyStepResult {
    double alpha;      // alpha_k
    double beta;       // beta_k (entering the step)
    double gamma;      // gamma_k
    double beta_next;  // beta_{k+1}
    double gamma_next; // gamma_{k+1}
    bool terminated;   // beta_{k+1} or gamma_{k+1} at or below the breakdown tolerance
};

// Orthogonal tridiagonalization with two starting vectors, run in the
// elliptic norms induced by M and N. Produces v_k with ‖v_k‖_M = 1 and u_k
// with ‖u_k‖_N = 1 and the scalars alpha_k, beta_k, gamma_k, keeping only a
// two-generation rolling window of basis vectors.
//
// Single-owner mutable state: one instance per solve. Distinct instances may
// run concurrently against shared operators.
class SsyProcess {
public:
    // Normalizes the starting vectors. Throws std::invalid_argument when b or
    // c is zero, NotSpdError when an M⁻¹/N⁻¹ quadratic form is negative.
    SsyProcess(const SqdProblem& problem, double breakdown_tol_factor);

    double beta1() const { return beta1_; }
    double gamma1() const { return gamma1_; }

    std::size_t k() const { return k_; }
    bool terminated() const { return terminated_; }

    double beta_curr() const { return beta_curr_; }
    double gamma_curr() const { return gamma_curr_; }

    // Advances the recurrence by one step. After the call for step k,
    // v_prev()/u_prev() hold v_k/u_k and v_curr()/u_curr() hold v_{k+1}/u_{k+1}
    // (the latter only when the step did not terminate).
    SsyStepResult step();

    const DenseVector& v_prev() const { return v_prev_; }
    const DenseVector& v_curr() const { return v_curr_; }
    const DenseVector& u_prev() const { return u_prev_; }
    const DenseVector& u_curr() const { return u_curr_; }

    // Allocation census for the storage-budget contract.
    std::size_t persistent_m_vectors() const;
    std::size_t persistent_n_vectors() const;
    std::size_t product_buffers() const { return 2; }

private:
    const LinearOperator* a_;
    const LinearOperator* minv_;
    const LinearOperator* ninv_;
    bool m_identity_, n_identity_;

    std::size_t k_ = 0;
    bool terminated_ = false;
    double beta1_ = 0.0, gamma1_ = 0.0;
    double beta_curr_ = 0.0, gamma_curr_ = 0.0; // beta_k, gamma_k for the upcoming step
    double beta_tol_ = 0.0, gamma_tol_ = 0.0;

    DenseVector v_prev_, v_curr_, u_prev_, u_curr_;
    // Unpreconditioned companions (M v_k, N u_k); empty when M/N is the identity.
    DenseVector vbar_prev_, vbar_curr_, ubar_prev_, ubar_curr_;
    DenseVector q_, p_; // operator-product buffers

    const DenseVector& vbar_prev() const { return m_identity_ ? v_prev_ : vbar_prev_; }
    const DenseVector& vbar_curr() const { return m_identity_ ? v_curr_ : vbar_curr_; }
    const DenseVector& ubar_prev() const { return n_identity_ ? u_prev_ : ubar_prev_; }
    const DenseVector& ubar_curr() const { return n_identity_ ? u_curr_ : ubar_curr_; }
};

// Runs the process for up to max_steps and collects coefficients; stops early
// at breakdown. Test and oracle convenience.
SsyCoefficients collect_ssy_coefficients(const SqdProblem& problem, std::size_t max_steps,
                                         double breakdown_tol_factor = 1.4901161193847656e-08);

// Dense block-tridiagonal projection of the system onto the process basis:
// 2×2 diagonal blocks [[tau, alpha_k], [alpha_k, nu]], super-diagonal blocks
// [[0, gamma_k], [beta_k, 0]] and their transposes below the diagonal. With
// rectangular = true the result has 2k+2 rows (one extra transposed
// off-diagonal block); otherwise it is the 2k×2k leading part.
DenseMatrix assemble_s(const SsyCoefficients& coeffs, int tau, int nu, std::size_t k,
                       bool rectangular);

} // namespace sqd
