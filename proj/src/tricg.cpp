#include "sqdkrylov/tricg.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqdkrylov/errors.hpp"

namespace sqd {

TriCgWorkspace::TriCgWorkspace(std::size_t m, std::size_t n)
    : gx_odd_(m, 0.0), gx_even_(m, 0.0), gy_odd_(n, 0.0), gy_even_(n, 0.0), x_(m, 0.0),
      y_(n, 0.0) {}

void TriCgWorkspace::ldlt_step(double alpha_k, double beta_k, double gamma_k) {
    ++k_;
    // Retire the previous block's pivots; pi_update still needs them this
    // iteration, so they move to the history slots rather than vanish.
    d_prevprev_ = d_odd_;
    d_prev_ = d_even_;
    if (k_ == 1) {
        sigma_ = eta_ = lambda_ = 0.0;
    } else {
        sigma_ = beta_k / d_prev_;
        eta_ = gamma_k / d_prevprev_;
        lambda_ = -eta_ * delta_ * d_prevprev_ / d_prev_; // delta_ still holds the last block's value
    }
    d_odd_ = 1.0 - sigma_ * sigma_ * d_prev_;
    delta_ = (alpha_k - lambda_ * sigma_ * d_prev_) / d_odd_;
    d_even_ = -1.0 - eta_ * eta_ * d_prevprev_ - lambda_ * lambda_ * d_prev_ -
              delta_ * delta_ * d_odd_;

    pivot_scale_ =
        std::max(pivot_scale_, std::abs(alpha_k) + std::abs(beta_k) + std::abs(gamma_k));
    const double tol = std::numeric_limits<double>::epsilon() * pivot_scale_;
    if (std::abs(d_odd_) < tol || std::abs(d_even_) < tol)
        throw PivotError("factorization pivot underflow at iteration " + std::to_string(k_));
}

void TriCgWorkspace::pi_update(double beta1, double gamma1) {
    double new_odd, new_even;
    if (k_ == 1) {
        new_odd = beta1 / d_odd_;
        new_even = (gamma1 - delta_ * beta1) / d_even_;
    } else {
        // Entering this step, pi_odd_/pi_even_ hold the previous block's
        // pair; d_prev_/d_prevprev_ the previous pivots.
        new_odd = -sigma_ * d_prev_ * pi_even_ / d_odd_;
        new_even = -(delta_ * d_odd_ * new_odd + lambda_ * d_prev_ * pi_even_ +
                     eta_ * d_prevprev_ * pi_odd_) /
                   d_even_;
    }
    pi_prevprev_ = pi_odd_;
    pi_prev_ = pi_even_;
    pi_odd_ = new_odd;
    pi_even_ = new_even;
}

void TriCgWorkspace::direction_update(const DenseVector& v_k, const DenseVector& u_k) {
    const std::size_t m = x_.size(), n = y_.size();
    // Entering slots hold g_{2k-3} (odd) and g_{2k-2} (even). The even slot
    // is consumed first so the odd slot can be rebuilt in place:
    //   g_{2k}   = (delta·sigma - lambda)·g_{2k-2} - eta·g_{2k-3} - delta·v_k
    //   g_{2k-1} = v_k - sigma·g_{2k-2}
    const double mix = delta_ * sigma_ - lambda_;
    for (std::size_t i = 0; i < m; ++i) {
        const double even_old = gx_even_[i];
        gx_odd_[i] = mix * even_old - eta_ * gx_odd_[i] - delta_ * v_k[i];
        gx_even_[i] = v_k[i] - sigma_ * even_old;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double even_old = gy_even_[i];
        gy_odd_[i] = u_k[i] + mix * even_old - eta_ * gy_odd_[i];
        gy_even_[i] = -sigma_ * even_old;
    }
    std::swap(gx_odd_, gx_even_); // restore (odd, even) slot roles
    std::swap(gy_odd_, gy_even_);
    for (std::size_t i = 0; i < m; ++i)
        x_[i] += pi_odd_ * gx_odd_[i] + pi_even_ * gx_even_[i];
    for (std::size_t i = 0; i < n; ++i)
        y_[i] += pi_odd_ * gy_odd_[i] + pi_even_ * gy_even_[i];
}

double TriCgWorkspace::residual_norm(double beta_next, double gamma_next) const {
    return std::hypot(gamma_next * (pi_odd_ - delta_ * pi_even_), beta_next * pi_even_);
}

namespace {

// H⁻¹r without forming r: (M⁻¹(b - A y) - tau·x, N⁻¹(c - Aᵀ x) - nu·y).
// The norm pairs it with r itself, which needs the forward maps.
double explicit_rnorm_impl(const SqdProblem& p, const DenseVector& x, const DenseVector& y) {
    const std::size_t m = p.m(), n = p.n();
    DenseVector r_top(m), r_bot(n);

    // r_top = b - tau·M x - A y
    DenseVector mx(m);
    p.Minv->apply_inverse(x, mx);
    r_top = p.b;
    axpy(-static_cast<double>(p.tau), mx, r_top);
    p.A->apply_accumulate(y, -1.0, r_top);
    scale(-1.0, r_top);

    // r_bot = c - Aᵀ x - nu·N y
    DenseVector ny(n);
    p.Ninv->apply_inverse(y, ny);
    r_bot = p.c;
    axpy(-static_cast<double>(p.nu), ny, r_bot);
    p.A->apply_adjoint_accumulate(x, -1.0, r_bot);
    scale(-1.0, r_bot);

    DenseVector s_top(m), s_bot(n);
    p.Minv->apply(r_top, s_top);
    p.Ninv->apply(r_bot, s_bot);
    const double sq = dot(r_top, s_top) + dot(r_bot, s_bot);
    return std::sqrt(std::max(0.0, sq));
}

} // namespace

double explicit_residual_norm(const SqdProblem& problem, const DenseVector& x,
                              const DenseVector& y) {
    if (!problem.Minv->invertible() || !problem.Ninv->invertible())
        throw std::invalid_argument(
            "explicit residual evaluation needs preconditioners with forward actions");
    return explicit_rnorm_impl(problem, x, y);
}

SolveReport tricg_solve(const SqdProblem& problem, const SolverOptions& opts) {
    problem.validate();
    if (problem.tau != 1 || problem.nu != -1)
        throw std::invalid_argument("tricg_solve requires the quasi-definite signs "
                                    "(tau, nu) = (+1, -1)");
    if (opts.explicit_residual &&
        (!problem.Minv->invertible() || !problem.Ninv->invertible()))
        throw std::invalid_argument(
            "explicit residual monitoring needs preconditioners with forward actions");

    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    const std::size_t m = problem.m(), n = problem.n();
    const std::size_t maxit = opts.resolve_max_iterations(m, n);

    SsyProcess ssy(problem, opts.breakdown_tol_factor);
    TriCgWorkspace ws(m, n);
    const double beta1 = ssy.beta1(), gamma1 = ssy.gamma1();

    double rnorm = initial_residual_norm(beta1, gamma1);
    report.residual_history.push_back(rnorm);

    bool breakdown = false;
    try {
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
            ws.ldlt_step(s.alpha, s.beta, s.gamma);
            ws.pi_update(beta1, gamma1);
            ws.direction_update(ssy.v_prev(), ssy.u_prev());
            rnorm = opts.explicit_residual ? explicit_rnorm_impl(problem, ws.x(), ws.y())
                                           : ws.residual_norm(s.beta_next, s.gamma_next);
            report.residual_history.push_back(rnorm);
            report.iterations++;
            breakdown = s.terminated;
        }
    } catch (const PivotError& e) {
        report.status = SolveStatus::error;
        report.message = e.what();
    }
    report.x = ws.take_x();
    report.y = ws.take_y();
    report.elapsed = std::chrono::steady_clock::now() - t0;
    return report;
}

double error_metric(const SqdProblem& problem, const DenseVector& x, const DenseVector& y,
                    const DenseVector& x_star, const DenseVector& y_star) {
    if (!problem.Minv->invertible() || !problem.Ninv->invertible())
        throw std::invalid_argument(
            "error_metric needs preconditioners with forward actions");
    const std::size_t m = problem.m(), n = problem.n();
    if (x.size() != m || x_star.size() != m || y.size() != n || y_star.size() != n)
        throw ShapeError("error_metric: iterate/reference shapes");
    DenseVector ex(m), ey(n);
    for (std::size_t i = 0; i < m; ++i) ex[i] = x_star[i] - x[i];
    for (std::size_t i = 0; i < n; ++i) ey[i] = y_star[i] - y[i];

    DenseVector top(m), bot(n);
    problem.Minv->apply_inverse(ex, top); // M ex
    scale(static_cast<double>(problem.tau), top);
    problem.A->apply_accumulate(ey, 1.0, top); // + A ey

    problem.Ninv->apply_inverse(ey, bot); // N ey
    scale(static_cast<double>(problem.nu), bot);
    problem.A->apply_adjoint_accumulate(ex, 1.0, bot); // + Aᵀ ex

    return dot(ex, top) + dot(ey, bot);
}

} // namespace sqd
