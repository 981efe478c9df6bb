#include <doctest.h>

#include <random>

#include "sqdkrylov/errors.hpp"
#include "sqdkrylov/trimr.hpp"
#include "support/oracles.hpp"

using namespace sqd;
using oracle::Mat;
using oracle::Vec;

namespace {

SqdProblem tiny_problem(DenseMatrix a, DenseVector b, DenseVector c, int tau = 1, int nu = -1) {
    SqdProblem p;
    const std::size_t m = a.rows(), n = a.cols();
    p.A = std::make_shared<DenseOperator>(std::move(a));
    p.Minv = std::make_shared<IdentityOperator>(m);
    p.Ninv = std::make_shared<IdentityOperator>(n);
    p.b = std::move(b);
    p.c = std::move(c);
    p.tau = tau;
    p.nu = nu;
    return p;
}

// Drives the QR workspace with a coefficient sequence and accumulates the
// pieces needed to rebuild Q and R densely.
struct QrTrace {
    Mat r;                  // 2k × 2k triangular factor
    Mat qt;                 // (2k+2) × (2k+2) accumulated reflections
    std::vector<double> pi; // finalized coefficients pi_1..pi_{2k}
    double pibar_odd = 0.0, pibar_even = 0.0;
};

QrTrace drive_qr(TriMrWorkspace& ws, const SsyCoefficients& c, std::size_t kmax) {
    QrTrace tr;
    const std::size_t dim = 2 * kmax + 2;
    tr.r = Mat::Zero(2 * kmax, 2 * kmax);
    tr.qt = Mat::Identity(dim, dim);

    auto reflect = [&](const GivensPair& g, std::size_t row_a, std::size_t row_b) {
        if (row_b >= dim) return;
        Mat rot = Mat::Identity(dim, dim);
        rot(row_a, row_a) = g.c;
        rot(row_a, row_b) = g.s;
        rot(row_b, row_a) = g.s;
        rot(row_b, row_b) = -g.c;
        tr.qt = rot * tr.qt;
    };

    auto set_if_inside = [&](std::size_t i, std::size_t j, double v) {
        if (i < 2 * kmax && j < 2 * kmax) tr.r(i, j) = v;
    };

    for (std::size_t k = 1; k <= kmax; ++k) {
        ws.qr_step(c.alphas[k - 1], c.betas[k], c.gammas[k]);
        if (k >= 2) {
            const std::size_t r_odd = 2 * k - 4, r_even = 2 * k - 3; // rows 2k-3, 2k-2
            set_if_inside(r_odd, r_odd + 2, ws.eta_prev_odd());
            set_if_inside(r_odd, r_odd + 3, ws.lambda_prev_odd());
            set_if_inside(r_odd, r_odd + 4, ws.mu_prev_odd());
            set_if_inside(r_even, r_even + 1, ws.sigma_prev_even());
            set_if_inside(r_even, r_even + 2, ws.eta_prev_even());
            set_if_inside(r_even, r_even + 3, ws.lambda_prev_even());
            set_if_inside(r_even, r_even + 4, ws.mu_prev_even());
        }
        // Reflections of this step, in application order.
        reflect(ws.givens(0), 2 * k - 1, 2 * k + 1);
        reflect(ws.givens(1), 2 * k - 2, 2 * k - 1);
        reflect(ws.givens(2), 2 * k - 1, 2 * k + 1);
        reflect(ws.givens(3), 2 * k - 1, 2 * k);
        set_if_inside(2 * k - 2, 2 * k - 2, ws.delta_odd());
        set_if_inside(2 * k - 2, 2 * k - 1, ws.sigma_odd());
        set_if_inside(2 * k - 1, 2 * k - 1, ws.delta_even());
        tr.pi.push_back(ws.pi_odd());
        tr.pi.push_back(ws.pi_even());
        tr.pibar_odd = ws.pibar_odd();
        tr.pibar_even = ws.pibar_even();
    }
    return tr;
}

} // namespace

TEST_CASE("sym_givens examples and reflection property") {
    SymGivens g = sym_givens(3.0, 4.0);
    CHECK(g.rot.c == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(g.rot.s == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(g.r == doctest::Approx(5.0).epsilon(1e-15));

    g = sym_givens(2.5, 0.0);
    CHECK(g.rot.c == 1.0);
    CHECK(g.rot.s == 0.0);
    CHECK(g.r == 2.5);

    g = sym_givens(0.0, 0.0);
    CHECK(g.rot.c == 1.0);
    CHECK(g.rot.s == 0.0);
    CHECK(g.r == 0.0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        const double a = val(rng), b = val(rng);
        SymGivens sg = sym_givens(a, b);
        CHECK(std::abs(sg.rot.c * sg.rot.c + sg.rot.s * sg.rot.s - 1.0) <= 1e-14);
        CHECK(std::abs(sg.rot.c * a + sg.rot.s * b - sg.r) <= 1e-14 * std::max(1.0, sg.r));
        CHECK(std::abs(sg.rot.s * a - sg.rot.c * b) <= 1e-14 * std::max(1.0, sg.r));
        CHECK(sg.r >= 0.0);
    }
}

TEST_CASE("decoupled single step: R = I and exact transport") {
    TriMrWorkspace ws(1, 1, 1, -1, 3.0, 4.0);
    ws.qr_step(0.0, 0.0, 0.0); // alpha_1 = 0, immediate termination
    CHECK(ws.delta_odd() == 1.0);
    CHECK(ws.delta_even() == 1.0);
    CHECK(ws.sigma_odd() == 0.0);
    CHECK(ws.residual_norm() == 0.0);
    CHECK(ws.pi_odd() == 3.0);
    CHECK(ws.pi_even() == -4.0);
}

TEST_CASE("QR reconstruction matches the assembled rectangular projection") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-2.0, 2.0), pos(0.2, 2.0);
    for (int trial = 0; trial < 9; ++trial) {
        const std::size_t kmax = 3;
        SsyCoefficients c;
        for (std::size_t j = 0; j <= kmax; ++j) {
            c.alphas.push_back(val(rng));
            c.betas.push_back(pos(rng));
            c.gammas.push_back(pos(rng));
        }
        const int tau = (trial % 2 == 0) ? 1 : -1;
        const int nu = (trial % 3 == 0) ? -1 : ((trial % 3 == 1) ? 0 : 1);
        TriMrWorkspace ws(1, 1, tau, nu, c.betas[0], c.gammas[0]);
        QrTrace tr = drive_qr(ws, c, kmax);

        Mat s = oracle::to_eigen(assemble_s(c, tau, nu, kmax, true));
        Mat rstack = Mat::Zero(2 * kmax + 2, 2 * kmax);
        rstack.topRows(2 * kmax) = tr.r;

        // The accumulated reflections triangularize the assembled matrix:
        // Qᵀ S = [R; 0], hence Q [R; 0] = S.
        CHECK((tr.qt * s - rstack).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((tr.qt.transpose() * rstack - s).cwiseAbs().maxCoeff() <= 1e-12);

        // The same reflections transport the right-hand side onto pi.
        Vec rhs = Vec::Zero(2 * kmax + 2);
        rhs(0) = c.betas[0];
        rhs(1) = c.gammas[0];
        Vec rotated = tr.qt * rhs;
        for (std::size_t i = 0; i < 2 * kmax; ++i)
            CHECK(std::abs(rotated(static_cast<Eigen::Index>(i)) - tr.pi[i]) <= 1e-12);
        CHECK(std::abs(rotated(2 * kmax) - tr.pibar_odd) <= 1e-12);
        CHECK(std::abs(rotated(2 * kmax + 1) - tr.pibar_even) <= 1e-12);

        // Band structure: upper triangular with bandwidth five.
        for (std::size_t i = 0; i < 2 * kmax; ++i)
            for (std::size_t j = 0; j < 2 * kmax; ++j)
                if (j < i || j > i + 4) CHECK(std::abs(tr.r(i, j)) <= 1e-13);
    }
}

TEST_CASE("QR factor diagonal stays positive") {
    oracle::ProblemSpec spec;
    spec.m = 20;
    spec.n = 14;
    spec.seed = 3;
    spec.density = 0.6;
    oracle::DenseProblem dp = oracle::make_dense_problem(spec);
    oracle::SsyTrace trace = oracle::run_ssy(dp.problem, 8);
    TriMrWorkspace ws(1, 1, 1, -1, trace.coeffs.betas[0], trace.coeffs.gammas[0]);
    for (std::size_t k = 1; k <= trace.steps; ++k) {
        ws.qr_step(trace.coeffs.alphas[k - 1], trace.coeffs.betas[k], trace.coeffs.gammas[k]);
        CHECK(ws.delta_odd() > 0.0);
        CHECK(ws.delta_even() > 0.0);
    }
}

TEST_CASE("solve: A = 0 converges at k=1 exactly") {
    DenseMatrix a(2, 3);
    SqdProblem p = tiny_problem(std::move(a), {2.0, -1.0}, {1.0, 1.0, 4.0});
    SolveReport r = trimr_solve(p);
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations == 1);
    for (std::size_t i = 0; i < 2; ++i) CHECK(r.x[i] == doctest::Approx(p.b[i]).epsilon(1e-14));
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.y[i] == doctest::Approx(-p.c[i]).epsilon(1e-14));
}

TEST_CASE("solve: 1x1 system solved in one step with zero residual") {
    DenseMatrix a(1, 1);
    a(0, 0) = 2.0;
    SqdProblem p = tiny_problem(std::move(a), {3.0}, {4.0});
    SolveReport r = trimr_solve(p);
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations == 1);
    CHECK(r.residual_history[0] == 5.0);
    CHECK(r.residual_history[1] <= 1e-13);
    CHECK(r.x[0] == doctest::Approx(2.2).epsilon(1e-13));
    CHECK(r.y[0] == doctest::Approx(0.4).epsilon(1e-13));
}

TEST_CASE("solve matches a dense factorization of the full system") {
    for (std::uint64_t seed : {201ull, 202ull, 203ull}) {
        oracle::ProblemSpec spec;
        spec.m = 50;
        spec.n = 50;
        spec.density = 0.15;
        spec.seed = seed;
        oracle::DenseProblem dp = oracle::make_dense_problem(spec);
        SolveReport r = trimr_solve(dp.problem);
        REQUIRE(r.status == SolveStatus::converged);
        Vec z(100);
        z << oracle::to_eigen(r.x), oracle::to_eigen(r.y);
        Vec z_star = dp.k_full.lu().solve(dp.rhs);
        CHECK((z - z_star).norm() <= 1e-8 * z_star.norm());
    }
}

TEST_CASE("solve with SPD preconditioners matches the dense solve") {
    oracle::ProblemSpec spec;
    spec.m = 28;
    spec.n = 21;
    spec.density = 0.5;
    spec.seed = 31;
    spec.spd_preconditioners = true;
    oracle::DenseProblem dp = oracle::make_dense_problem(spec);
    SolveReport r = trimr_solve(dp.problem);
    REQUIRE(r.status == SolveStatus::converged);
    Vec z(49);
    z << oracle::to_eigen(r.x), oracle::to_eigen(r.y);
    Vec z_star = dp.k_full.lu().solve(dp.rhs);
    CHECK((z - z_star).norm() <= 1e-8 * z_star.norm());
}

TEST_CASE("residual history is nonincreasing and optimal at every step") {
    oracle::ProblemSpec spec;
    spec.m = 32;
    spec.n = 26;
    spec.density = 0.4;
    spec.seed = 57;
    oracle::DenseProblem dp = oracle::make_dense_problem(spec);
    SolveReport r = trimr_solve(dp.problem);
    REQUIRE(r.status == SolveStatus::converged);
    for (std::size_t k = 1; k < r.residual_history.size(); ++k)
        CHECK(r.residual_history[k] <= r.residual_history[k - 1] + 1e-14);

    // Per-step optimum from the dense least-squares route.
    oracle::SsyTrace trace = oracle::run_ssy(dp.problem, std::min<std::size_t>(10, r.iterations));
    for (std::size_t k = 1; k <= trace.steps; ++k) {
        Mat s = oracle::to_eigen(assemble_s(trace.coeffs, 1, -1, k, true));
        Vec rhs = Vec::Zero(2 * static_cast<Eigen::Index>(k) + 2);
        rhs(0) = trace.coeffs.betas[0];
        rhs(1) = trace.coeffs.gammas[0];
        Vec z = s.colPivHouseholderQr().solve(rhs);
        const double optimum = (s * z - rhs).norm();
        CHECK(std::abs(r.residual_history[k] - optimum) <=
              1e-9 * std::max(optimum, 1e-30) + 1e-12);
    }
}

TEST_CASE("iterate equals the dense minimum-residual solution at every step") {
    oracle::ProblemSpec spec;
    spec.m = 18;
    spec.n = 13;
    spec.density = 0.7;
    spec.seed = 71;
    oracle::DenseProblem dp = oracle::make_dense_problem(spec);

    SsyProcess ssy(dp.problem, 1e-8);
    TriMrWorkspace ws(spec.m, spec.n, 1, -1, ssy.beta1(), ssy.gamma1());
    oracle::SsyTrace trace = oracle::run_ssy(dp.problem, 6);
    for (std::size_t k = 1; k <= 6; ++k) {
        SsyStepResult s = ssy.step();
        ws.qr_step(s.alpha, s.beta_next, s.gamma_next);
        ws.direction_update(ssy.v_prev(), ssy.u_prev());

        Mat s_rect = oracle::to_eigen(assemble_s(trace.coeffs, 1, -1, k, true));
        Vec rhs = Vec::Zero(2 * static_cast<Eigen::Index>(k) + 2);
        rhs(0) = ssy.beta1();
        rhs(1) = ssy.gamma1();
        Vec z_sub = s_rect.colPivHouseholderQr().solve(rhs);
        Mat w = oracle::interleaved_basis(trace, k, /*parity_swap=*/false);
        Vec z_dense = w * z_sub;
        Vec z_stream(spec.m + spec.n);
        z_stream << oracle::to_eigen(ws.x()), oracle::to_eigen(ws.y());
        CHECK((z_stream - z_dense).norm() <= 1e-9 * std::max(1.0, z_dense.norm()));
    }
}

TEST_CASE("saddle-point mode matches the dense solve") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        oracle::ProblemSpec spec;
        spec.m = 24;
        spec.n = 10; // tall full-rank A keeps the zero-block system nonsingular
        spec.density = 0.8;
        spec.nu = 0;
        spec.seed = seed;
        oracle::DenseProblem dp = oracle::make_dense_problem(spec);
        SolveReport r = trimr_solve(dp.problem);
        REQUIRE(r.status == SolveStatus::converged);
        Vec z(34);
        z << oracle::to_eigen(r.x), oracle::to_eigen(r.y);
        Vec z_star = dp.k_full.lu().solve(dp.rhs);
        CHECK((z - z_star).norm() <= 1e-8 * z_star.norm());
    }
}

TEST_CASE("generalized sign patterns solve their systems") {
    for (int tau : {1, -1}) {
        for (int nu : {1, -1}) {
            oracle::ProblemSpec spec;
            spec.m = 20;
            spec.n = 16;
            spec.density = 0.5;
            spec.tau = tau;
            spec.nu = nu;
            spec.seed =
                40 + static_cast<std::uint64_t>(tau + 2) + 10 * static_cast<std::uint64_t>(nu + 2);
            spec.value_scale = 0.5; // keep the definite variants nonsingular
            oracle::DenseProblem dp = oracle::make_dense_problem(spec);
            SolveReport r = trimr_solve(dp.problem);
            REQUIRE(r.status == SolveStatus::converged);
            Vec z(36);
            z << oracle::to_eigen(r.x), oracle::to_eigen(r.y);
            Vec z_star = dp.k_full.lu().solve(dp.rhs);
            CHECK((z - z_star).norm() <= 1e-8 * z_star.norm());
        }
    }
}

TEST_CASE("workspace census: two more vectors per side than the Galerkin variant") {
    oracle::ProblemSpec spec;
    spec.m = 9;
    spec.n = 5;
    oracle::DenseProblem dp = oracle::make_dense_problem(spec);
    SsyProcess ssy(dp.problem, 1e-8);
    TriMrWorkspace ws(spec.m, spec.n, 1, -1, ssy.beta1(), ssy.gamma1());
    CHECK(ssy.persistent_m_vectors() + ws.persistent_m_vectors() == 7);
    CHECK(ssy.persistent_n_vectors() + ws.persistent_n_vectors() == 7);
    CHECK(ssy.product_buffers() == 2);
}

TEST_CASE("every stored reflection satisfies the unit-circle contract") {
    oracle::ProblemSpec spec;
    spec.m = 22;
    spec.n = 17;
    spec.seed = 88;
    spec.density = 0.5;
    oracle::DenseProblem dp = oracle::make_dense_problem(spec);
    SsyProcess ssy(dp.problem, 1e-8);
    TriMrWorkspace ws(spec.m, spec.n, 1, -1, ssy.beta1(), ssy.gamma1());
    for (std::size_t k = 1; k <= 8 && !ssy.terminated(); ++k) {
        SsyStepResult s = ssy.step();
        ws.qr_step(s.alpha, s.beta_next, s.gamma_next);
        for (std::size_t i = 0; i < 4; ++i) {
            const GivensPair& g = ws.givens(i);
            CHECK(std::abs(g.c * g.c + g.s * g.s - 1.0) <= 1e-14);
        }
    }
}

TEST_CASE("breakdown with one-sided exhaustion reports the last iterate") {
    DenseMatrix a(1, 2);
    a(0, 0) = 1.0;
    SqdProblem p = tiny_problem(std::move(a), {1.0}, {1.0, 1.0});
    SolveReport r = trimr_solve(p);
    CHECK(r.status == SolveStatus::breakdown_terminated);
    CHECK(r.iterations >= 1);
    CHECK(r.residual_history.back() > 1e-10);
    for (std::size_t k = 1; k < r.residual_history.size(); ++k)
        CHECK(r.residual_history[k] <= r.residual_history[k - 1] + 1e-14);
}
