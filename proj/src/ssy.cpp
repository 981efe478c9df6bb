#include "sqdkrylov/ssy.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sqdkrylov/errors.hpp"

namespace sqd {

namespace {

// Elliptic normalization of a residual pair (bar, precond = Op⁻¹·bar):
// scale = sqrt(barᵀ·precond). Returns 0 on a numerically zero form and
// throws when the form is negative beyond rounding.
double elliptic_norm(const DenseVector& bar, const DenseVector& precond, const char* which) {
    double s = dot(bar, precond);
    if (s < 0.0) {
        double mag = norm2(bar) * norm2(precond);
        if (s < -1e-13 * std::max(1.0, mag))
            throw NotSpdError(std::string("preconditioner not SPD: negative quadratic form for ") +
                              which);
        s = 0.0;
    }
    return std::sqrt(s);
}

} // namespace

SsyProcess::SsyProcess(const SqdProblem& problem, double breakdown_tol_factor)
    : a_(problem.A.get()), minv_(problem.Minv.get()), ninv_(problem.Ninv.get()),
      m_identity_(problem.Minv->is_identity()), n_identity_(problem.Ninv->is_identity()) {
    problem.validate();
    const std::size_t m = problem.m(), n = problem.n();
    if (all_zero(problem.b)) throw std::invalid_argument("zero initial vector: b");
    if (all_zero(problem.c)) throw std::invalid_argument("zero initial vector: c");

    v_prev_.assign(m, 0.0);
    u_prev_.assign(n, 0.0);
    q_.assign(m, 0.0);
    p_.assign(n, 0.0);

    // beta_1 M v_1 = b
    if (m_identity_) {
        v_curr_ = problem.b;
        beta1_ = norm2(v_curr_);
    } else {
        vbar_prev_.assign(m, 0.0);
        vbar_curr_ = problem.b;
        v_curr_.assign(m, 0.0);
        minv_->apply(vbar_curr_, v_curr_);
        beta1_ = elliptic_norm(vbar_curr_, v_curr_, "M");
        if (beta1_ > 0.0) scale(1.0 / beta1_, vbar_curr_);
    }
    if (!(beta1_ > 0.0)) throw NotSpdError("preconditioner not SPD: bᵀM⁻¹b is not positive");
    scale(1.0 / beta1_, v_curr_);

    // gamma_1 N u_1 = c
    if (n_identity_) {
        u_curr_ = problem.c;
        gamma1_ = norm2(u_curr_);
    } else {
        ubar_prev_.assign(n, 0.0);
        ubar_curr_ = problem.c;
        u_curr_.assign(n, 0.0);
        ninv_->apply(ubar_curr_, u_curr_);
        gamma1_ = elliptic_norm(ubar_curr_, u_curr_, "N");
        if (gamma1_ > 0.0) scale(1.0 / gamma1_, ubar_curr_);
    }
    if (!(gamma1_ > 0.0)) throw NotSpdError("preconditioner not SPD: cᵀN⁻¹c is not positive");
    scale(1.0 / gamma1_, u_curr_);

    beta_curr_ = beta1_;
    gamma_curr_ = gamma1_;
    beta_tol_ = breakdown_tol_factor * beta1_;
    gamma_tol_ = breakdown_tol_factor * gamma1_;
}

SsyStepResult SsyProcess::step() {
    if (terminated_) throw std::logic_error("SsyProcess::step called after termination");
    ++k_;
    SsyStepResult res{};
    res.beta = beta_curr_;
    res.gamma = gamma_curr_;

    // q = A u_k - gamma_k M v_{k-1}, alpha_k = v_kᵀ q
    q_ = vbar_prev();
    a_->apply_accumulate(u_curr_, -gamma_curr_, q_);
    res.alpha = dot(v_curr_, q_);

    // p = Aᵀ v_k - beta_k N u_{k-1}
    p_ = ubar_prev();
    a_->apply_adjoint_accumulate(v_curr_, -beta_curr_, p_);

    // beta_{k+1} M v_{k+1} = q - alpha_k M v_k
    axpy(-res.alpha, vbar_curr(), q_);
    // gamma_{k+1} N u_{k+1} = p - alpha_k N u_k
    axpy(-res.alpha, ubar_curr(), p_);

    double beta_next, gamma_next;
    if (m_identity_) {
        beta_next = norm2(q_);
        v_prev_ = q_; // v_{k-1} slot is retired; it will hold v_{k+1}
    } else {
        minv_->apply(q_, v_prev_);
        beta_next = elliptic_norm(q_, v_prev_, "M");
        vbar_prev_ = q_;
    }
    if (n_identity_) {
        gamma_next = norm2(p_);
        u_prev_ = p_;
    } else {
        ninv_->apply(p_, u_prev_);
        gamma_next = elliptic_norm(p_, u_prev_, "N");
        ubar_prev_ = p_;
    }

    res.beta_next = beta_next;
    res.gamma_next = gamma_next;
    res.terminated = (beta_next <= beta_tol_) || (gamma_next <= gamma_tol_);

    if (!res.terminated) {
        scale(1.0 / beta_next, v_prev_);
        scale(1.0 / gamma_next, u_prev_);
        if (!m_identity_) scale(1.0 / beta_next, vbar_prev_);
        if (!n_identity_) scale(1.0 / gamma_next, ubar_prev_);
    }
    // The swap makes v_prev()/u_prev() the step's v_k/u_k in both branches.
    std::swap(v_prev_, v_curr_);
    std::swap(u_prev_, u_curr_);
    if (!m_identity_) std::swap(vbar_prev_, vbar_curr_);
    if (!n_identity_) std::swap(ubar_prev_, ubar_curr_);

    beta_curr_ = beta_next;
    gamma_curr_ = gamma_next;
    terminated_ = res.terminated;
    return res;
}

std::size_t SsyProcess::persistent_m_vectors() const {
    return 2 + (m_identity_ ? 0 : 2);
}

std::size_t SsyProcess::persistent_n_vectors() const {
    return 2 + (n_identity_ ? 0 : 2);
}

SsyCoefficients collect_ssy_coefficients(const SqdProblem& problem, std::size_t max_steps,
                                         double breakdown_tol_factor) {
    SsyProcess proc(problem, breakdown_tol_factor);
    SsyCoefficients coeffs;
    coeffs.betas.push_back(proc.beta1());
    coeffs.gammas.push_back(proc.gamma1());
    for (std::size_t k = 0; k < max_steps && !proc.terminated(); ++k) {
        SsyStepResult s = proc.step();
        coeffs.alphas.push_back(s.alpha);
        coeffs.betas.push_back(s.beta_next);
        coeffs.gammas.push_back(s.gamma_next);
    }
    return coeffs;
}

DenseMatrix assemble_s(const SsyCoefficients& coeffs, int tau, int nu, std::size_t k,
                       bool rectangular) {
    if (k == 0) throw std::invalid_argument("assemble_s: k must be positive");
    // Square needs alpha_1..k, beta_2..k, gamma_2..k; rectangular additionally
    // beta_{k+1}, gamma_{k+1}.
    const std::size_t off_needed = rectangular ? k + 1 : k;
    if (coeffs.alphas.size() < k || coeffs.betas.size() < off_needed ||
        coeffs.gammas.size() < off_needed)
        throw std::invalid_argument("assemble_s: insufficient coefficients for k block rows");

    const std::size_t rows = rectangular ? 2 * k + 2 : 2 * k;
    DenseMatrix s(rows, 2 * k);
    for (std::size_t j = 1; j <= k; ++j) {
        const std::size_t r = 2 * (j - 1), c = 2 * (j - 1);
        const double alpha = coeffs.alphas[j - 1];
        s(r, c) = static_cast<double>(tau);
        s(r, c + 1) = alpha;
        s(r + 1, c) = alpha;
        s(r + 1, c + 1) = static_cast<double>(nu);
        if (j >= 2) {
            const double beta = coeffs.betas[j - 1], gamma = coeffs.gammas[j - 1];
            // Block (j-1, j) holds [[0, gamma_j], [beta_j, 0]].
            s(r - 2, c + 1) = gamma;
            s(r - 1, c) = beta;
            // Block (j, j-1) is its transpose.
            s(r + 1, c - 2) = gamma;
            s(r, c - 1) = beta;
        }
    }
    if (rectangular) {
        const double beta = coeffs.betas[k], gamma = coeffs.gammas[k];
        s(2 * k, 2 * k - 1) = beta;
        s(2 * k + 1, 2 * k - 2) = gamma;
    }
    return s;
}

} // namespace sqd
