#include "sqdkrylov/trimr.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sqdkrylov/errors.hpp"
#include "sqdkrylov/tricg.hpp"

namespace sqd {

TriMrWorkspace::TriMrWorkspace(std::size_t m, std::size_t n, int tau, int nu, double beta1,
                               double gamma1)
    : tau_(tau), nu_(nu), pibar_odd_(beta1), pibar_even_(gamma1), x_(m, 0.0), y_(n, 0.0) {
    for (auto& g : gx_) g.assign(m, 0.0);
    for (auto& g : gy_) g.assign(n, 0.0);
}

void TriMrWorkspace::qr_step(double alpha_k, double beta_next, double gamma_next) {
    ++k_;
    const double tau = static_cast<double>(tau_), nu = static_cast<double>(nu_);

    if (k_ == 1) {
        // First two rows of the projected matrix: (tau, alpha_1 | 0,
        // gamma_2, 0, 0) and (alpha_1, nu | beta_2, 0, 0, 0). Note the odd
        // row carries gamma_2 and the even row beta_2; the assembled matrix
        // fixes this orientation and the dense QR cross-check pins it.
        theta_bar_ = alpha_k;
        delta_bar_odd_ = tau;
        delta_bar_even_ = nu;
        sigma_bar_odd_ = alpha_k;
        eta_bar_odd_ = 0.0;
        lambda_bar_odd_ = gamma_next;
        sigma_bar_even_ = beta_next;
    } else {
        // Finish the previous iteration's reflections: alpha_k, beta_{k+1}
        // and gamma_{k+1} fill in the columns that were still unknown then.
        const GivensPair g1 = rot_[0], g2 = rot_[1], g3 = rot_[2], g4 = rot_[3];

        const double sigma_t = g1.c * sigma_bar_even_ + g1.s * alpha_k;
        const double eta_t = g1.s * nu;
        const double lambda_t = g1.s * beta_next;
        const double theta_t = g1.s * sigma_bar_even_ - g1.c * alpha_k;
        const double delta_t2 = -g1.c * nu;
        const double sigma_t2 = -g1.c * beta_next;

        mu_hist_odd_ = mu_prev_odd_;
        mu_hist_even_ = mu_prev_even_;
        lambda_hist_even_ = lambda_prev_even_;

        eta_prev_odd_ = g2.c * eta_bar_odd_ + g2.s * sigma_t;
        lambda_prev_odd_ = g2.c * lambda_bar_odd_ + g2.s * eta_t;
        mu_prev_odd_ = g2.s * lambda_t;
        const double sigma_h = g2.s * eta_bar_odd_ - g2.c * sigma_t;
        const double eta_h = g2.s * lambda_bar_odd_ - g2.c * eta_t;
        const double lambda_h = -g2.c * lambda_t;

        const double sigma_r = g3.c * sigma_h + g3.s * theta_t;
        const double eta_r = g3.c * eta_h + g3.s * delta_t2;
        const double lambda_r = g3.c * lambda_h + g3.s * sigma_t2;
        theta_bar_ = g3.s * sigma_h - g3.c * theta_t;
        delta_bar_even_ = g3.s * eta_h - g3.c * delta_t2;
        sigma_bar_even_ = g3.s * lambda_h - g3.c * sigma_t2;

        sigma_prev_even_ = g4.c * sigma_r + g4.s * tau;
        eta_prev_even_ = g4.c * eta_r + g4.s * alpha_k;
        lambda_prev_even_ = g4.c * lambda_r;
        mu_prev_even_ = g4.s * gamma_next;
        delta_bar_odd_ = g4.s * sigma_r - g4.c * tau;
        sigma_bar_odd_ = g4.s * eta_r - g4.c * alpha_k;
        eta_bar_odd_ = g4.s * lambda_r;
        lambda_bar_odd_ = -g4.c * gamma_next;
    }

    // This iteration's four reflections. The first clears the transposed
    // coupling entry gamma_{k+1} below the diagonal, the last clears
    // beta_{k+1}; the middle two triangularize the 2×2 diagonal block.
    const SymGivens r1 = sym_givens(theta_bar_, gamma_next);
    rot_[0] = r1.rot;
    const double theta_k = r1.r;
    const double delta_t_even = r1.rot.c * delta_bar_even_;
    const double g_k = r1.rot.s * delta_bar_even_;

    const SymGivens r2 = sym_givens(delta_bar_odd_, theta_k);
    rot_[1] = r2.rot;
    delta_odd_ = r2.r;
    sigma_odd_ = r2.rot.c * sigma_bar_odd_ + r2.rot.s * delta_t_even;
    const double delta_h_even = r2.rot.s * sigma_bar_odd_ - r2.rot.c * delta_t_even;

    const SymGivens r3 = sym_givens(delta_h_even, g_k);
    rot_[2] = r3.rot;
    const double delta_r_even = r3.r;

    const SymGivens r4 = sym_givens(delta_r_even, beta_next);
    rot_[3] = r4.rot;
    delta_even_ = r4.r;

    // Rotate the projected right-hand side.
    const double pi_t_even = r1.rot.c * pibar_even_;
    const double pi_t_tail = r1.rot.s * pibar_even_;
    pi_odd_ = r2.rot.c * pibar_odd_ + r2.rot.s * pi_t_even;
    const double pi_h_even = r2.rot.s * pibar_odd_ - r2.rot.c * pi_t_even;
    const double pi_r_even = r3.rot.c * pi_h_even + r3.rot.s * pi_t_tail;
    pibar_next_even_ = r3.rot.s * pi_h_even - r3.rot.c * pi_t_tail;
    pi_even_ = r4.rot.c * pi_r_even;
    pibar_next_odd_ = r4.rot.s * pi_r_even;

    pibar_odd_ = pibar_next_odd_;
    pibar_even_ = pibar_next_even_;
}

void TriMrWorkspace::direction_update(const DenseVector& v_k, const DenseVector& u_k) {
    const std::size_t m = x_.size(), n = y_.size();
    // Slot roles relative to the ring base: g_{2k-5}, g_{2k-4}, g_{2k-3},
    // g_{2k-2}. The two oldest are rebuilt in place as g_{2k-1}, g_{2k}.
    DenseVector& gx5 = gx_[base_ % 4];
    DenseVector& gx4 = gx_[(base_ + 1) % 4];
    DenseVector& gx3 = gx_[(base_ + 2) % 4];
    DenseVector& gx2 = gx_[(base_ + 3) % 4];
    DenseVector& gy5 = gy_[base_ % 4];
    DenseVector& gy4 = gy_[(base_ + 1) % 4];
    DenseVector& gy3 = gy_[(base_ + 2) % 4];
    DenseVector& gy2 = gy_[(base_ + 3) % 4];

    for (std::size_t i = 0; i < m; ++i) {
        const double odd = (v_k[i] - mu_hist_odd_ * gx5[i] - lambda_hist_even_ * gx4[i] -
                            eta_prev_odd_ * gx3[i] - sigma_prev_even_ * gx2[i]) /
                           delta_odd_;
        gx5[i] = odd; // g_{2k-1}
        gx4[i] = -(mu_hist_even_ * gx4[i] + lambda_prev_odd_ * gx3[i] + eta_prev_even_ * gx2[i] +
                   sigma_odd_ * odd) /
                 delta_even_; // g_{2k}
        x_[i] += pi_odd_ * gx5[i] + pi_even_ * gx4[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double odd = -(mu_hist_odd_ * gy5[i] + lambda_hist_even_ * gy4[i] +
                             eta_prev_odd_ * gy3[i] + sigma_prev_even_ * gy2[i]) /
                           delta_odd_;
        gy5[i] = odd;
        gy4[i] = (u_k[i] - mu_hist_even_ * gy4[i] - lambda_prev_odd_ * gy3[i] -
                  eta_prev_even_ * gy2[i] - sigma_odd_ * odd) /
                 delta_even_;
        y_[i] += pi_odd_ * gy5[i] + pi_even_ * gy4[i];
    }
    base_ = (base_ + 2) % 4;
}

double TriMrWorkspace::residual_norm() const {
    return std::hypot(pibar_next_odd_, pibar_next_even_);
}

SolveReport trimr_solve(const SqdProblem& problem, const SolverOptions& opts) {
    problem.validate();
    if (opts.explicit_residual &&
        (!problem.Minv->invertible() || !problem.Ninv->invertible()))
        throw std::invalid_argument(
            "explicit residual monitoring needs preconditioners with forward actions");

    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    const std::size_t m = problem.m(), n = problem.n();
    const std::size_t maxit = opts.resolve_max_iterations(m, n);

    SsyProcess ssy(problem, opts.breakdown_tol_factor);
    const double beta1 = ssy.beta1(), gamma1 = ssy.gamma1();
    TriMrWorkspace ws(m, n, problem.tau, problem.nu, beta1, gamma1);

    double rnorm = initial_residual_norm(beta1, gamma1);
    report.residual_history.push_back(rnorm);

    bool breakdown = false;
    while (true) {
        if (stopping_check(rnorm, beta1, gamma1, opts)) {
            report.status = SolveStatus::converged;
            break;
        }
        if (breakdown) {
            report.status = SolveStatus::breakdown_terminated;
            report.message = "basis expansion terminated with residual above tolerance";
            break;
        }
        if (report.iterations >= maxit) {
            report.status = SolveStatus::max_iterations;
            break;
        }
        SsyStepResult s = ssy.step();
        ws.qr_step(s.alpha, s.beta_next, s.gamma_next);
        ws.direction_update(ssy.v_prev(), ssy.u_prev());
        rnorm = opts.explicit_residual ? explicit_residual_norm(problem, ws.x(), ws.y())
                                       : ws.residual_norm();
        report.residual_history.push_back(rnorm);
        report.iterations++;
        breakdown = s.terminated;
    }

    report.x = ws.take_x();
    report.y = ws.take_y();
    report.elapsed = std::chrono::steady_clock::now() - t0;
    return report;
}

} // namespace sqd
