#include "sqdkrylov/harness.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sqdkrylov/baselines.hpp"
#include "sqdkrylov/errors.hpp"
#include "sqdkrylov/matrix_market.hpp"
#include "sqdkrylov/tricg.hpp"
#include "sqdkrylov/trimr.hpp"

namespace sqd {

namespace {

// Uniform in [0, 1) from the top 53 bits; keeps generated values independent
// of the standard library's distribution internals.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_symmetric(std::mt19937_64& rng) { return 2.0 * uniform01(rng) - 1.0; }

} // namespace

SqdProblem build_sqd_from_a(CsrMatrix a, int tau, int nu) {
    const std::size_t m = a.nrows(), n = a.ncols();
    DenseVector om = ones(m), on = ones(n);
    DenseVector b(m), c(n);
    a.multiply(on, b);
    axpy(static_cast<double>(tau), om, b);
    a.multiply_transpose(om, c);
    axpy(static_cast<double>(nu), on, c);
    if (all_zero(b))
        throw std::invalid_argument(
            "ones construction yields b = 0; supply a different right-hand side");
    if (all_zero(c))
        throw std::invalid_argument(
            "ones construction yields c = 0; supply a different right-hand side");

    SqdProblem p;
    p.A = std::make_shared<CsrOperator>(std::move(a));
    p.Minv = std::make_shared<IdentityOperator>(m);
    p.Ninv = std::make_shared<IdentityOperator>(n);
    p.b = std::move(b);
    p.c = std::move(c);
    p.tau = tau;
    p.nu = nu;
    return p;
}

SqdProblem generate_random_sqd(std::size_t m, std::size_t n, double density, std::uint64_t seed) {
    RandomSqdOptions o;
    o.density = density;
    return generate_random_sqd(m, n, o, seed);
}

SqdProblem generate_random_sqd(std::size_t m, std::size_t n, const RandomSqdOptions& options,
                               std::uint64_t seed) {
    if (m == 0 || n == 0) throw std::invalid_argument("generate_random_sqd: m, n must be >= 1");
    if (!(options.density > 0.0) || options.density > 1.0)
        throw std::invalid_argument("generate_random_sqd: density must lie in (0, 1]");

    std::mt19937_64 rng(seed);
    std::vector<CsrMatrix::Triplet> entries;
    const double scale_v =
        options.normalize
            ? 1.0 / std::sqrt(std::max(1.0, options.density * static_cast<double>(std::max(m, n))))
            : 1.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double coin = uniform01(rng);
            const double value = uniform_symmetric(rng); // drawn unconditionally: keeps the
                                                         // stream aligned across densities
            if (coin < options.density) entries.push_back({i, j, scale_v * value});
        }
    CsrMatrix a = CsrMatrix::from_triplets(m, n, std::move(entries));

    SqdProblem p = build_sqd_from_a(std::move(a), options.tau, options.nu);

    if (options.precon != PreconKind::identity) {
        // Preconditioners change the elliptic geometry only; the rhs keeps
        // the ones solution since M, N do not enter the system matrix here.
        if (options.precon == PreconKind::spd_diagonal) {
            DenseVector dm(m), dn(n);
            for (auto& v : dm) v = 0.5 + 1.5 * uniform01(rng);
            for (auto& v : dn) v = 0.5 + 1.5 * uniform01(rng);
            // Operators hold M⁻¹ and N⁻¹.
            for (auto& v : dm) v = 1.0 / v;
            for (auto& v : dn) v = 1.0 / v;
            p.Minv = std::make_shared<DiagonalOperator>(std::move(dm));
            p.Ninv = std::make_shared<DiagonalOperator>(std::move(dn));
        } else {
            auto dense_spd = [&rng](std::size_t dim) {
                DenseMatrix s(dim, dim);
                DenseVector v(dim);
                for (auto& e : v) e = uniform_symmetric(rng);
                for (std::size_t i = 0; i < dim; ++i) {
                    s(i, i) = 1.0 + uniform01(rng);
                    for (std::size_t j = 0; j < dim; ++j) s(i, j) += v[i] * v[j];
                }
                // Symmetrize exactly.
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t j = 0; j < i; ++j) {
                        const double avg = 0.5 * (s(i, j) + s(j, i));
                        s(i, j) = s(j, i) = avg;
                    }
                return s;
            };
            p.Minv = spd_inverse_from_dense(dense_spd(m));
            p.Ninv = spd_inverse_from_dense(dense_spd(n));
        }
    }
    if (options.nshift != 0.0) p.Ninv = shift_spd_operator(p.Ninv, options.nshift);
    return p;
}

OperatorPtr shift_spd_operator(const OperatorPtr& inv_op, double shift) {
    if (shift == 0.0) return inv_op;
    const std::size_t n = inv_op->nrows();
    if (inv_op->is_identity()) {
        DenseVector d(n, 1.0 / (1.0 + shift));
        return std::make_shared<DiagonalOperator>(std::move(d));
    }
    if (const auto* diag = dynamic_cast<const DiagonalOperator*>(inv_op.get())) {
        DenseVector d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = 1.0 / (1.0 / diag->diagonal()[i] + shift);
        return std::make_shared<DiagonalOperator>(std::move(d));
    }
    if (const auto* spd = dynamic_cast<const SpdInverse*>(inv_op.get())) {
        // Rebuild N from the factor, shift, refactor.
        const DenseMatrix& l = spd->factor();
        DenseMatrix nmat(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double s = 0.0;
                for (std::size_t p = 0; p <= j; ++p) s += l(i, p) * l(j, p);
                nmat(i, j) = nmat(j, i) = s;
            }
        for (std::size_t i = 0; i < n; ++i) nmat(i, i) += shift;
        return spd_inverse_from_dense(nmat);
    }
    throw std::invalid_argument("shift_spd_operator: unsupported operator kind");
}

void write_residual_csv(const std::string& path, const DenseVector& history) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw FormatError("cannot open output file: " + path);
    std::fputs("iter,rnorm\n", f);
    for (std::size_t k = 0; k < history.size(); ++k)
        std::fprintf(f, "%zu,%.17g\n", k, history[k]);
    std::fclose(f);
}

DenseVector read_residual_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "iter,rnorm")
        throw FormatError(path + ": unexpected CSV header");
    DenseVector history;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError(path + ": malformed CSV row");
        history.push_back(std::stod(line.substr(comma + 1)));
    }
    return history;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.solvers.empty())
        throw std::invalid_argument("run_experiment: at least one solver required");

    SqdProblem problem;
    std::string name = config.problem_name;
    if (config.synthetic) {
        RandomSqdOptions o;
        o.density = config.density;
        o.tau = config.tau;
        o.nu = config.nu;
        o.nshift = config.nshift;
        problem = generate_random_sqd(config.m, config.n, o, config.seed);
        if (name.empty())
            name = "synthetic_" + std::to_string(config.m) + "x" + std::to_string(config.n) +
                   "_seed" + std::to_string(config.seed);
    } else {
        CsrMatrix a = read_matrix_market(config.matrix_path);
        problem = build_sqd_from_a(std::move(a), config.tau, config.nu);
        if (config.nshift != 0.0)
            problem.Ninv = shift_spd_operator(problem.Ninv, config.nshift);
        if (name.empty()) name = std::filesystem::path(config.matrix_path).stem().string();
    }

    ExperimentResult result;
    result.problem_name = name;
    std::filesystem::create_directories(config.out_dir);

    for (const std::string& solver : config.solvers) {
        SolveReport report;
        try {
            if (solver == "tricg")
                report = tricg_solve(problem, config.options);
            else if (solver == "trimr")
                report = trimr_solve(problem, config.options);
            else if (solver == "symmlq")
                report = symmlq_solve(FullSystemView(problem), config.options);
            else if (solver == "minres")
                report = minres_solve(FullSystemView(problem), config.options);
            else
                throw std::invalid_argument("unknown solver: " + solver);
        } catch (const std::exception& e) {
            report.status = SolveStatus::error;
            report.message = e.what();
        }
        if (!report.residual_history.empty()) {
            const std::string csv =
                (std::filesystem::path(config.out_dir) / (name + "_" + solver + ".csv")).string();
            write_residual_csv(csv, report.residual_history);
        }
        result.runs.emplace_back(solver, std::move(report));
    }
    return result;
}

} // namespace sqd
