/// \file solver.hpp
/// \brief Preconditioned conjugate gradients for the Dirichlet-reduced system.
#ifndef VEMREC_SOLVER_HPP
#define VEMREC_SOLVER_HPP

#include <cmath>
#include <span>
#include <vector>

#include "vemrec/csr.hpp"

namespace vemrec {

struct SolverConfig {
    double rel_tol = 1e-12;
    int max_iter = 20000;
    enum class Preconditioner { none, jacobi } preconditioner = Preconditioner::jacobi;
    bool record_residuals = false;
};

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0; // ||b - A x|| / ||b||
    bool converged = false;
    std::vector<double> residual_history; // preconditioned-norm residuals when recorded
};

// CG with Jacobi (or no) preconditioning, x0 = 0. Stops when the true
// residual satisfies ||b - A x|| <= rel_tol ||b||.
inline SolveResult cg_solve(const CsrMatrix& A, std::span<const double> b, SolverConfig cfg = {}) {
    require(cfg.rel_tol > 0.0, "cg_solve: rel_tol must be positive");
    const int n = A.n;
    require(static_cast<int>(b.size()) == n, "cg_solve: rhs size mismatch");

    SolveResult res;
    res.x.assign(static_cast<std::size_t>(n), 0.0);

    std::vector<double> diag_inv(static_cast<std::size_t>(n), 1.0);
    if (cfg.preconditioner == SolverConfig::Preconditioner::jacobi) {
        const auto d = A.diagonal();
        for (int i = 0; i < n; ++i) {
            if (!(d[static_cast<std::size_t>(i)] > 0.0))
                throw SolverError("cg_solve: nonpositive diagonal at row " + std::to_string(i));
            diag_inv[static_cast<std::size_t>(i)] = 1.0 / d[static_cast<std::size_t>(i)];
        }
    }

    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = diag_inv[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
    std::vector<double> p = z;
    std::vector<double> ap(static_cast<std::size_t>(n));

    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    if (cfg.record_residuals) res.residual_history.push_back(std::sqrt(std::abs(rz)));

    for (int it = 0; it < cfg.max_iter; ++it) {
        A.matvec(p, ap);
        double pap = 0.0;
        for (int i = 0; i < n; ++i) pap += p[static_cast<std::size_t>(i)] * ap[static_cast<std::size_t>(i)];
        if (!std::isfinite(pap)) throw SolverError("cg_solve: non-finite curvature");
        if (pap <= 0.0) throw SolverError("cg_solve: matrix not positive definite");
        const double alpha = rz / pap;
        double rnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            res.x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] -= alpha * ap[static_cast<std::size_t>(i)];
            rnorm += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        }
        rnorm = std::sqrt(rnorm);
        if (!std::isfinite(rnorm)) throw SolverError("cg_solve: non-finite residual");
        res.iterations = it + 1;
        res.residual = rnorm / bnorm;
        double rz_next = 0.0;
        for (int i = 0; i < n; ++i) {
            z[static_cast<std::size_t>(i)] = diag_inv[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
            rz_next += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
        }
        if (cfg.record_residuals) res.residual_history.push_back(std::sqrt(std::abs(rz_next)));
        if (res.residual <= cfg.rel_tol) {
            res.converged = true;
            return res;
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i)
            p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    }
    return res; // caller decides what to do with a non-converged solve
}

} // namespace vemrec

#endif
