#include "sqdkrylov/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "sqdkrylov/errors.hpp"

namespace sqd {

void SqdProblem::validate() const {
    if (!A || !Minv || !Ninv) throw std::invalid_argument("SqdProblem: missing operator");
    if (Minv->nrows() != m() || Minv->ncols() != m())
        throw ShapeError("SqdProblem: Minv must be m×m");
    if (Ninv->nrows() != n() || Ninv->ncols() != n())
        throw ShapeError("SqdProblem: Ninv must be n×n");
    if (b.size() != m()) throw ShapeError("SqdProblem: b must have length m");
    if (c.size() != n()) throw ShapeError("SqdProblem: c must have length n");
    if (tau != 1 && tau != -1) throw std::invalid_argument("SqdProblem: tau must be +1 or -1");
    if (nu != 1 && nu != 0 && nu != -1)
        throw std::invalid_argument("SqdProblem: nu must be +1, 0 or -1");
    if (!all_finite(b) || !all_finite(c))
        throw std::invalid_argument("SqdProblem: right-hand side has non-finite entries");
}

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::breakdown_terminated: return "breakdown_terminated";
    case SolveStatus::error: return "error";
    }
    return "unknown";
}

double initial_residual_norm(double beta1, double gamma1) { return std::hypot(beta1, gamma1); }

bool stopping_check(double rnorm, double beta1, double gamma1, const SolverOptions& opts) {
    return rnorm <= opts.atol + initial_residual_norm(beta1, gamma1) * opts.rtol;
}

} // namespace sqd
