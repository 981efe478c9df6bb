#pragma once

#include <array>
#include <cstddef>

#include "sqdkrylov/givens.hpp"
#include "sqdkrylov/problem.hpp"
#include "sqdkrylov/ssy.hpp"

namespace sqd {

// Per-solve state of the minimum-residual method: the streaming QR
// factorization of the projected rectangular system (four reflections per
// iteration), the rotated right-hand-side coefficients and four direction
// slots per side.
//
// Scalar naming mirrors the factorization bands: delta/sigma/eta/lambda/mu
// are the five diagonals of the triangular factor; *_bar values belong to
// rows whose remaining entries are finalized one iteration later, when the
// next tridiagonalization coefficients exist; *_tilde/_hat/_ring are the
// within-iteration intermediates of the four reflections.
class TriMrWorkspace {
public:
    TriMrWorkspace(std::size_t m, std::size_t n, int tau, int nu, double beta1, double gamma1);

    std::size_t k() const { return k_; }

    // One factorization step: finishes the previous iteration's four
    // reflections now that alpha_k is known, then forms this iteration's
    // four reflections from (alpha_k, beta_{k+1}, gamma_{k+1}) and rotates
    // the projected right-hand side.
    void qr_step(double alpha_k, double beta_next, double gamma_next);

    // Direction recursions and the iterate update from v_k, u_k.
    void direction_update(const DenseVector& v_k, const DenseVector& u_k);

    // ‖r_k‖_{H⁻¹} from the rotated right-hand-side tail.
    double residual_norm() const;

    const DenseVector& x() const { return x_; }
    const DenseVector& y() const { return y_; }
    DenseVector take_x() { return std::move(x_); }
    DenseVector take_y() { return std::move(y_); }

    // Current step's reflections and finalized band entries (rows 2k-1, 2k
    // within the first 2k columns).
    const GivensPair& givens(std::size_t i) const { return rot_[i]; } // i in 0..3
    double delta_odd() const { return delta_odd_; }                   // delta_{2k-1}
    double sigma_odd() const { return sigma_odd_; }                   // sigma_{2k-1}
    double delta_even() const { return delta_even_; }                 // delta_{2k}

    // Entries of rows 2k-3 and 2k-2 finalized by this iteration's completion.
    double eta_prev_odd() const { return eta_prev_odd_; }       // eta_{2k-3}
    double lambda_prev_odd() const { return lambda_prev_odd_; } // lambda_{2k-3}
    double mu_prev_odd() const { return mu_prev_odd_; }         // mu_{2k-3}
    double sigma_prev_even() const { return sigma_prev_even_; } // sigma_{2k-2}
    double eta_prev_even() const { return eta_prev_even_; }     // eta_{2k-2}
    double lambda_prev_even() const { return lambda_prev_even_; } // lambda_{2k-2}
    double mu_prev_even() const { return mu_prev_even_; }         // mu_{2k-2}

    double pi_odd() const { return pi_odd_; }
    double pi_even() const { return pi_even_; }
    double pibar_odd() const { return pibar_next_odd_; }   // tail component 2k+1
    double pibar_even() const { return pibar_next_even_; } // tail component 2k+2

    std::size_t persistent_m_vectors() const { return 5; } // x and four direction slots
    std::size_t persistent_n_vectors() const { return 5; }

private:
    int tau_, nu_;
    std::size_t k_ = 0;

    // Carried row values awaiting completion.
    double theta_bar_ = 0.0;
    double delta_bar_odd_ = 0.0, delta_bar_even_ = 0.0;
    double sigma_bar_odd_ = 0.0, sigma_bar_even_ = 0.0;
    double eta_bar_odd_ = 0.0, lambda_bar_odd_ = 0.0;

    std::array<GivensPair, 4> rot_{};

    double delta_odd_ = 0.0, sigma_odd_ = 0.0, delta_even_ = 0.0;
    double eta_prev_odd_ = 0.0, lambda_prev_odd_ = 0.0, mu_prev_odd_ = 0.0;
    double sigma_prev_even_ = 0.0, eta_prev_even_ = 0.0, lambda_prev_even_ = 0.0,
           mu_prev_even_ = 0.0;
    // Band entries of two iterations ago, still referenced by the direction
    // recursions: mu_{2k-5}, mu_{2k-4}, lambda_{2k-4}.
    double mu_hist_odd_ = 0.0, mu_hist_even_ = 0.0, lambda_hist_even_ = 0.0;

    double pibar_odd_, pibar_even_; // carried right-hand-side pair
    double pi_odd_ = 0.0, pi_even_ = 0.0;
    double pibar_next_odd_ = 0.0, pibar_next_even_ = 0.0;

    // Ring of four direction slots per side; base_ indexes g_{2k-5}.
    std::array<DenseVector, 4> gx_, gy_;
    std::size_t base_ = 0;
    DenseVector x_, y_;
};

// Minimum-residual solver. Accepts tau in {+1,-1} and nu in {+1,0,-1};
// nu = 0 is the saddle-point mode, in which the N slot may hold any SPD
// operator.
SolveReport trimr_solve(const SqdProblem& problem, const SolverOptions& opts = {});

} // namespace sqd
