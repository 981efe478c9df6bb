// Command-line driver: builds a block system from a Matrix Market file or a
// seeded synthetic instance, runs the requested solvers and writes one
// residual-history CSV per solver.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqdkrylov/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Iterative solvers for symmetric quasi-definite block systems"};

    std::string solver = "all";
    std::string matrix_path;
    std::vector<std::string> synthetic;
    std::uint64_t seed = 0;
    double atol = 1e-12, rtol = 1e-10, nshift = 0.0;
    std::size_t maxit = 0;
    int tau = 1, nu = -1;
    bool explicit_residual = false;
    std::string out_dir = ".";

    app.add_option("--solver", solver, "tricg|trimr|symmlq|minres|all")
        ->check(CLI::IsMember({"tricg", "trimr", "symmlq", "minres", "all"}));
    auto* matrix_opt = app.add_option("--matrix", matrix_path, "Matrix Market file holding A");
    auto* synth_opt =
        app.add_option("--synthetic", synthetic, "M N DENSITY for a seeded random instance")
            ->expected(3);
    matrix_opt->excludes(synth_opt);
    app.add_option("--seed", seed, "random seed for --synthetic");
    app.add_option("--atol", atol, "absolute stopping tolerance");
    app.add_option("--rtol", rtol, "relative stopping tolerance");
    app.add_option("--maxit", maxit, "iteration cap (default 2(m+n))");
    app.add_option("--tau", tau, "sign of the (1,1) block")->check(CLI::IsMember({1, -1}));
    app.add_option("--nu", nu, "sign of the (2,2) block; 0 is the saddle-point mode")
        ->check(CLI::IsMember({1, 0, -1}));
    app.add_option("--nshift", nshift, "add this multiple of I to N");
    app.add_flag("--explicit-residual", explicit_residual,
                 "recompute residual norms from scratch each iteration");
    app.add_option("--out", out_dir, "output directory for CSV files");

    CLI11_PARSE(app, argc, argv);

    sqd::ExperimentConfig config;
    try {
        if (!synthetic.empty()) {
            config.synthetic = true;
            config.m = std::stoull(synthetic[0]);
            config.n = std::stoull(synthetic[1]);
            config.density = std::stod(synthetic[2]);
        } else if (!matrix_path.empty()) {
            config.matrix_path = matrix_path;
        } else {
            std::fprintf(stderr, "error: either --matrix or --synthetic is required\n");
            return 3;
        }
        config.seed = seed;
        config.tau = tau;
        config.nu = nu;
        config.nshift = nshift;
        config.out_dir = out_dir;
        config.options.atol = atol;
        config.options.rtol = rtol;
        config.options.max_iterations = maxit;
        config.options.explicit_residual = explicit_residual;
        if (solver == "all")
            config.solvers = {"tricg", "trimr", "symmlq", "minres"};
        else
            config.solvers = {solver};
        if (nu == 0) {
            // Only the minimum-residual block method supports the zero block.
            std::erase(config.solvers, std::string("tricg"));
            if (config.solvers.empty()) {
                std::fprintf(stderr, "error: tricg does not support --nu 0\n");
                return 3;
            }
        }

        sqd::ExperimentResult result = sqd::run_experiment(config);

        int exit_code = 0;
        std::printf("problem: %s\n", result.problem_name.c_str());
        for (const auto& [name, report] : result.runs) {
            const double final_rnorm =
                report.residual_history.empty() ? -1.0 : report.residual_history.back();
            std::printf("%-7s status=%-21s iters=%-6zu rnorm=%.3e elapsed=%.3fs%s%s\n",
                        name.c_str(), sqd::to_string(report.status), report.iterations,
                        final_rnorm, report.elapsed.count(),
                        report.message.empty() ? "" : "  ", report.message.c_str());
            switch (report.status) {
            case sqd::SolveStatus::converged: break;
            case sqd::SolveStatus::max_iterations:
            case sqd::SolveStatus::breakdown_terminated:
                exit_code = std::max(exit_code, 2);
                break;
            case sqd::SolveStatus::error: exit_code = 3; break;
            }
        }
        return exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
