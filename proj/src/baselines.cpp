#include "sqdkrylov/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqdkrylov/errors.hpp"
#include "sqdkrylov/givens.hpp"

namespace sqd {

FullSystemView::FullSystemView(const SqdProblem& problem)
    : p_(&problem), m_(problem.m()), n_(problem.n()) {
    problem.validate();
    if (!problem.Minv->invertible() || !problem.Ninv->invertible())
        throw std::invalid_argument(
            "FullSystemView needs preconditioners with forward actions");
}

void FullSystemView::apply_k(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim() || y.size() != dim()) throw ShapeError("FullSystemView::apply_k");
    auto xt = x.subspan(0, m_), xb = x.subspan(m_, n_);
    auto yt = y.subspan(0, m_), yb = y.subspan(m_, n_);
    p_->Minv->apply_inverse(xt, yt); // M x_top
    scale(static_cast<double>(p_->tau), yt);
    p_->A->apply_accumulate(xb, 1.0, yt);
    p_->Ninv->apply_inverse(xb, yb); // N x_bot
    scale(static_cast<double>(p_->nu), yb);
    p_->A->apply_adjoint_accumulate(xt, 1.0, yb);
}

void FullSystemView::apply_hinv(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim() || y.size() != dim()) throw ShapeError("FullSystemView::apply_hinv");
    p_->Minv->apply(x.subspan(0, m_), y.subspan(0, m_));
    p_->Ninv->apply(x.subspan(m_, n_), y.subspan(m_, n_));
}

DenseVector FullSystemView::rhs() const {
    DenseVector r(dim());
    std::copy(p_->b.begin(), p_->b.end(), r.begin());
    std::copy(p_->c.begin(), p_->c.end(), r.begin() + static_cast<std::ptrdiff_t>(m_));
    return r;
}

namespace {

// Three-term recurrence producing an H-orthonormal basis of the
// preconditioned Krylov space: K V_k = H V_{k+1} T with T tridiagonal.
class PrecLanczos {
public:
    PrecLanczos(const FullSystemView& view, double breakdown_tol_factor) : view_(&view) {
        const std::size_t d = view.dim();
        z_curr_ = view.rhs();
        v_curr_.assign(d, 0.0);
        view.apply_hinv(z_curr_, v_curr_);
        const double sq = dot(z_curr_, v_curr_);
        if (sq < 0.0) throw NotSpdError("preconditioner not SPD on the full system");
        beta1_ = std::sqrt(sq);
        if (!(beta1_ > 0.0)) throw std::invalid_argument("zero initial vector: (b, c)");
        scale(1.0 / beta1_, z_curr_);
        scale(1.0 / beta1_, v_curr_);
        z_prev_.assign(d, 0.0);
        v_prev_.assign(d, 0.0);
        w_.assign(d, 0.0);
        beta_curr_ = 0.0; // no coupling to a previous basis vector yet
        tol_ = breakdown_tol_factor * beta1_;
    }

    double beta1() const { return beta1_; }
    bool terminated() const { return terminated_; }
    // After step() for step k, v_of_step() is v_k and v_ahead() is v_{k+1};
    // before the first step v_ahead() is v_1.
    const DenseVector& v_of_step() const { return v_prev_; }
    const DenseVector& v_ahead() const { return v_curr_; }

    // Returns (alpha_k, beta_{k+1}).
    std::pair<double, double> step() {
        view_->apply_k(v_curr_, w_);
        const double alpha = dot(v_curr_, w_);
        axpy(-alpha, z_curr_, w_);
        if (beta_curr_ > 0.0) axpy(-beta_curr_, z_prev_, w_);
        view_->apply_hinv(w_, v_prev_); // v_{k-1} slot is retired
        double sq = dot(w_, v_prev_);
        if (sq < 0.0) {
            if (sq < -1e-13 * std::max(1.0, norm2(w_) * norm2(v_prev_)))
                throw NotSpdError("preconditioner not SPD on the full system");
            sq = 0.0;
        }
        const double beta_next = std::sqrt(sq);
        terminated_ = beta_next <= tol_;
        if (!terminated_) {
            scale(1.0 / beta_next, v_prev_);
            z_prev_ = w_;
            scale(1.0 / beta_next, z_prev_);
        }
        std::swap(v_prev_, v_curr_);
        std::swap(z_prev_, z_curr_);
        beta_curr_ = beta_next;
        return {alpha, beta_next};
    }

private:
    const FullSystemView* view_;
    DenseVector z_prev_, z_curr_, v_prev_, v_curr_, w_;
    double beta1_ = 0.0, beta_curr_ = 0.0, tol_ = 0.0;
    bool terminated_ = false;
};

void split_solution(const FullSystemView& view, const DenseVector& z, SolveReport& report) {
    report.x.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(view.m()));
    report.y.assign(z.begin() + static_cast<std::ptrdiff_t>(view.m()), z.end());
}

} // namespace

SolveReport minres_solve(const FullSystemView& view, const SolverOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    const std::size_t d = view.dim();
    const std::size_t maxit = opts.resolve_max_iterations(view.m(), view.n());

    PrecLanczos lanczos(view, opts.breakdown_tol_factor);
    const double beta1 = lanczos.beta1();

    DenseVector xfull(d, 0.0), d_prev(d, 0.0), d_prevprev(d, 0.0);
    GivensPair rot_prev{-1.0, 0.0}, rot_prevprev{-1.0, 0.0};
    double beta_k = 0.0; // subdiagonal entering step k (none at k=1)
    double phibar = beta1;
    double rnorm = phibar;
    report.residual_history.push_back(rnorm);

    bool breakdown = false;
    while (true) {
        if (stopping_check(rnorm, beta1, 0.0, opts)) {
            report.status = SolveStatus::converged;
            break;
        }
        if (breakdown) {
            report.status = SolveStatus::breakdown_terminated;
            report.message = "Krylov space exhausted with residual above tolerance";
            break;
        }
        if (report.iterations >= maxit) {
            report.status = SolveStatus::max_iterations;
            break;
        }
        auto [alpha, beta_next] = lanczos.step();
        const DenseVector& v_k = lanczos.v_of_step();

        const double eps_k = rot_prevprev.s * beta_k;
        const double delta_mid = -rot_prevprev.c * beta_k;
        const double delta_k = rot_prev.c * delta_mid + rot_prev.s * alpha;
        const double gammabar = rot_prev.s * delta_mid - rot_prev.c * alpha;
        const SymGivens g = sym_givens(gammabar, beta_next);
        if (g.r == 0.0) {
            report.status = SolveStatus::error;
            report.message = "singular projected system";
            break;
        }
        // New direction overwrites the retiring slot.
        for (std::size_t i = 0; i < d; ++i) {
            const double dk = (v_k[i] - delta_k * d_prev[i] - eps_k * d_prevprev[i]) / g.r;
            d_prevprev[i] = dk;
            xfull[i] += g.rot.c * phibar * dk;
        }
        std::swap(d_prevprev, d_prev);
        phibar *= g.rot.s;
        rnorm = phibar;
        report.residual_history.push_back(rnorm);
        report.iterations++;

        rot_prevprev = rot_prev;
        rot_prev = g.rot;
        beta_k = beta_next;
        breakdown = lanczos.terminated();
    }
    if (report.status != SolveStatus::error) split_solution(view, xfull, report);
    report.elapsed = std::chrono::steady_clock::now() - t0;
    return report;
}

SolveReport symmlq_solve(const FullSystemView& view, const SolverOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    const std::size_t d = view.dim();
    const std::size_t maxit = opts.resolve_max_iterations(view.m(), view.n());

    PrecLanczos lanczos(view, opts.breakdown_tol_factor);
    const double beta1 = lanczos.beta1();
    const double transfer_tol = std::sqrt(std::numeric_limits<double>::epsilon());

    DenseVector x_partial(d, 0.0), wbar(d), w(d), x_out(d, 0.0);
    const DenseVector zero_dir(d, 0.0);
    wbar = lanczos.v_ahead(); // v_1
    GivensPair rot_prev{-1.0, 0.0}, rot_prevprev{-1.0, 0.0};
    double beta_k = 0.0;
    double zeta_prev = 0.0, zeta_prevprev = 0.0;
    double pivot_scale = 1.0;

    double rnorm = beta1;
    report.residual_history.push_back(rnorm);

    bool breakdown = false;
    while (true) {
        if (stopping_check(rnorm, beta1, 0.0, opts)) {
            report.status = SolveStatus::converged;
            break;
        }
        if (breakdown) {
            report.status = SolveStatus::breakdown_terminated;
            report.message = "Krylov space exhausted with residual above tolerance";
            break;
        }
        if (report.iterations >= maxit) {
            report.status = SolveStatus::max_iterations;
            break;
        }
        auto [alpha, beta_next] = lanczos.step();
        const DenseVector& v_next = lanczos.terminated() ? zero_dir : lanczos.v_ahead();

        const std::size_t k = report.iterations + 1;
        const double eps_k = rot_prevprev.s * beta_k;
        const double delta_mid = -rot_prevprev.c * beta_k;
        const double delta_k = rot_prev.c * delta_mid + rot_prev.s * alpha;
        const double gammabar = rot_prev.s * delta_mid - rot_prev.c * alpha;
        const double numer =
            (k == 1 ? beta1 : 0.0) - delta_k * zeta_prev - eps_k * zeta_prevprev;

        pivot_scale = std::max(pivot_scale, std::abs(alpha) + beta_k + beta_next);
        const bool cg_defined = std::abs(gammabar) > transfer_tol * pivot_scale;

        double rnorm_cg = std::numeric_limits<double>::infinity();
        if (cg_defined) {
            const double zetabar = numer / gammabar;
            // Galerkin point: partial sum plus a step along the provisional
            // direction.
            x_out = x_partial;
            axpy(zetabar, wbar, x_out);
            rnorm_cg = beta_next * std::abs(rot_prev.s * zeta_prev - rot_prev.c * zetabar);
        }
        const double rnorm_lq = std::hypot(numer, beta_next * rot_prev.s * zeta_prev);
        if (!cg_defined) x_out = x_partial; // minimum-norm point of this iteration

        rnorm = cg_defined ? rnorm_cg : rnorm_lq;
        report.residual_history.push_back(rnorm);
        report.iterations++;

        const SymGivens g = sym_givens(gammabar, beta_next);
        if (g.r == 0.0) {
            report.status = SolveStatus::error;
            report.message = "singular projected system";
            break;
        }
        const double zeta = numer / g.r;
        for (std::size_t i = 0; i < d; ++i) {
            w[i] = g.rot.c * wbar[i] + g.rot.s * v_next[i];
            wbar[i] = g.rot.s * wbar[i] - g.rot.c * v_next[i];
            x_partial[i] += zeta * w[i];
        }
        zeta_prevprev = zeta_prev;
        zeta_prev = zeta;
        rot_prevprev = rot_prev;
        rot_prev = g.rot;
        beta_k = beta_next;
        breakdown = lanczos.terminated();
    }
    if (report.status != SolveStatus::error) split_solution(view, x_out, report);
    report.elapsed = std::chrono::steady_clock::now() - t0;
    return report;
}

} // namespace sqd
