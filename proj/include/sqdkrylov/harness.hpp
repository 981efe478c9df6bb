#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqdkrylov/csr.hpp"
#include "sqdkrylov/problem.hpp"

namespace sqd {

// Right-hand side built so that the exact solution is the vector of ones:
// b = A·1 + tau·1, c = Aᵀ·1 + nu·1, with identity preconditioners. Throws
// std::invalid_argument when either block comes out identically zero.
SqdProblem build_sqd_from_a(CsrMatrix a, int tau = +1, int nu = -1);

enum class PreconKind {
    identity,       // M = N = I
    spd_diagonal,   // random positive diagonals
    spd_dense_rank1 // random diagonal plus a rank-one update, dense factors
};

struct RandomSqdOptions {
    double density = 0.1;
    int tau = +1;
    int nu = -1;
    PreconKind precon = PreconKind::identity;
    double nshift = 0.0; // adds nshift·I to N
    // Scales entries so the spectral norm of A stays O(1) as size grows.
    bool normalize = true;
    // Extra multiplier on the entries. Values well above 1 spread the
    // coupling singular values over a wide range, the regime where the
    // block methods pull ahead of the one-vector baselines.
    double value_scale = 1.0;
};

// Reproducible sparse problem: the same (m, n, options, seed) always yields
// the same bits. The right-hand side uses the ones construction above.
SqdProblem generate_random_sqd(std::size_t m, std::size_t n, double density, std::uint64_t seed);
SqdProblem generate_random_sqd(std::size_t m, std::size_t n, const RandomSqdOptions& options,
                               std::uint64_t seed);

// Adds shift·I to the matrix inverted by the N slot. Supports identity and
// diagonal handles (the shifted operator stays diagonal).
OperatorPtr shift_spd_operator(const OperatorPtr& inv_op, double shift);

struct ExperimentConfig {
    // Problem source: a Matrix Market path or synthetic dimensions.
    std::string matrix_path;
    bool synthetic = false;
    std::size_t m = 0, n = 0;
    double density = 0.1;
    std::uint64_t seed = 0;

    std::vector<std::string> solvers; // tricg, trimr, symmlq, minres
    SolverOptions options;
    int tau = +1;
    int nu = -1;
    double nshift = 0.0;
    std::string out_dir = ".";
    std::string problem_name; // CSV file stem; derived from the source if empty
};

struct ExperimentResult {
    std::string problem_name;
    // Solver name -> report, in the order requested.
    std::vector<std::pair<std::string, SolveReport>> runs;
};

// Builds the problem, runs every requested solver (failures are recorded and
// the run continues), and writes one residual-history CSV per solver.
ExperimentResult run_experiment(const ExperimentConfig& config);

// CSV contract: header "iter,rnorm", one row per history entry from k = 0,
// '\n' newlines, 17 significant digits.
void write_residual_csv(const std::string& path, const DenseVector& history);
DenseVector read_residual_csv(const std::string& path);

} // namespace sqd
