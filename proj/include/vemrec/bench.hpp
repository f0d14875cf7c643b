/// \file bench.hpp
/// \brief Benchmark problems and study drivers: the four test cases, uniform
///        convergence studies with rate fits against DOF, and the adaptive
///        solve-estimate-mark-refine loop.
#ifndef VEMREC_BENCH_HPP
#define VEMREC_BENCH_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vemrec/estimator.hpp"
#include "vemrec/generators.hpp"
#include "vemrec/norms.hpp"
#include "vemrec/recovery.hpp"
#include "vemrec/refine.hpp"
#include "vemrec/solver.hpp"
#include "vemrec/vem.hpp"

namespace vemrec {

struct TestCase {
    std::string name;
    enum class Domain { unit_square, lshape } domain = Domain::unit_square;
    ScalarField u;      // exact solution
    VectorField grad_u; // exact gradient
    ScalarField f;      // source
    ScalarField g;      // Dirichlet data
};

namespace detail {

// Spot check -lap(u) = f with a 5-point finite-difference Laplacian at random
// interior points; guards against typos in the hand-derived sources.
inline void check_case_consistency(const TestCase& tc, int npoints = 100) {
    std::mt19937_64 rng(2024);
    const double fd_h = 1e-4;
    int checked = 0;
    while (checked < npoints) {
        Point2 p;
        if (tc.domain == TestCase::Domain::unit_square) {
            p = {uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95)};
        } else {
            p = {uniform(rng, -0.95, 0.95), uniform(rng, -0.95, 0.95)};
            if (p.x > -0.05 && p.y < 0.05) continue; // stay away from the reentrant corner
        }
        const double lap = (tc.u({p.x + fd_h, p.y}) + tc.u({p.x - fd_h, p.y}) +
                            tc.u({p.x, p.y + fd_h}) + tc.u({p.x, p.y - fd_h}) - 4.0 * tc.u(p)) /
                           (fd_h * fd_h);
        const double fv = tc.f(p);
        if (std::abs(-lap - fv) > 1e-4 * (1.0 + std::abs(fv) + std::abs(lap)))
            throw Error("test case '" + tc.name + "': -lap(u) != f near (" + std::to_string(p.x) +
                        ", " + std::to_string(p.y) + ")");
        ++checked;
    }
}

} // namespace detail

// -lap u = 2 pi^2 sin(pi x) sin(pi y) on the unit square, u = sin(pi x) sin(pi y).
inline TestCase case1() {
    TestCase tc;
    tc.name = "case1";
    tc.domain = TestCase::Domain::unit_square;
    tc.u = [](Point2 p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); };
    tc.grad_u = [](Point2 p) {
        return Point2{M_PI * std::cos(M_PI * p.x) * std::sin(M_PI * p.y),
                      M_PI * std::sin(M_PI * p.x) * std::cos(M_PI * p.y)};
    };
    tc.f = [](Point2 p) { return 2.0 * M_PI * M_PI * std::sin(M_PI * p.x) * std::sin(M_PI * p.y); };
    tc.g = tc.u;
    detail::check_case_consistency(tc);
    return tc;
}

// Laplace equation on the L-shaped domain, u = r^(2/3) sin(2 theta / 3) with
// theta measured from the positive x axis into [0, 3 pi / 2].
inline TestCase case2() {
    TestCase tc;
    tc.name = "case2";
    tc.domain = TestCase::Domain::lshape;
    auto polar = [](Point2 p) {
        const double r = std::hypot(p.x, p.y);
        double theta = std::atan2(p.y, p.x);
        if (theta < 0.0) theta += 2.0 * M_PI;
        return std::pair<double, double>{r, theta};
    };
    tc.u = [polar](Point2 p) {
        const auto [r, theta] = polar(p);
        return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * theta / 3.0);
    };
    tc.grad_u = [polar](Point2 p) {
        const auto [r, theta] = polar(p);
        if (r == 0.0) return Point2{0.0, 0.0};
        const double ur = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0) * std::sin(2.0 * theta / 3.0);
        const double ut = (2.0 / 3.0) * std::pow(r, 2.0 / 3.0) * std::cos(2.0 * theta / 3.0);
        const double ct = std::cos(theta), st = std::sin(theta);
        return Point2{ur * ct - ut / r * st, ur * st + ut / r * ct};
    };
    tc.f = [](Point2) { return 0.0; };
    tc.g = tc.u;
    detail::check_case_consistency(tc);
    return tc;
}

// Two Gaussian bumps with sigma = sqrt(1e-3) centered on the diagonal.
inline TestCase case3() {
    TestCase tc;
    tc.name = "case3";
    tc.domain = TestCase::Domain::unit_square;
    const double sigma = std::sqrt(1e-3);
    const double mu1 = 0.25, mu2 = 0.75;
    const double scale = 1.0 / (2.0 * M_PI * sigma);
    auto bump = [sigma](Point2 p, double mu) {
        const double dx = p.x - mu, dy = p.y - mu;
        return std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
    };
    tc.u = [=](Point2 p) { return scale * (bump(p, mu1) + bump(p, mu2)); };
    tc.grad_u = [=](Point2 p) {
        Point2 g{0.0, 0.0};
        for (double mu : {mu1, mu2}) {
            const double b = bump(p, mu);
            g.x += scale * b * (-(p.x - mu) / (sigma * sigma));
            g.y += scale * b * (-(p.y - mu) / (sigma * sigma));
        }
        return g;
    };
    tc.f = [=](Point2 p) {
        // -lap of each bump: b * (2 sigma^2 - r^2) / sigma^4 * scale
        double s = 0.0;
        for (double mu : {mu1, mu2}) {
            const double dx = p.x - mu, dy = p.y - mu;
            const double r2 = dx * dx + dy * dy;
            s += scale * bump(p, mu) * (2.0 * sigma * sigma - r2) / (sigma * sigma * sigma * sigma);
        }
        return s;
    };
    tc.g = tc.u;
    detail::check_case_consistency(tc);
    return tc;
}

// Sharp interior layer along 25x - 100y + 25 = 0:
// u = 16 x (1-x) y (1-y) atan(25 x - 100 y + 25).
inline TestCase case4() {
    TestCase tc;
    tc.name = "case4";
    tc.domain = TestCase::Domain::unit_square;
    auto parts = [](Point2 p) {
        const double w = 16.0 * p.x * (1.0 - p.x) * p.y * (1.0 - p.y);
        const double s = 25.0 * p.x - 100.0 * p.y + 25.0;
        return std::pair<double, double>{w, s};
    };
    tc.u = [parts](Point2 p) {
        const auto [w, s] = parts(p);
        return w * std::atan(s);
    };
    tc.grad_u = [parts](Point2 p) {
        const auto [w, s] = parts(p);
        const double wx = 16.0 * (1.0 - 2.0 * p.x) * p.y * (1.0 - p.y);
        const double wy = 16.0 * p.x * (1.0 - p.x) * (1.0 - 2.0 * p.y);
        const double dt = 1.0 / (1.0 + s * s);
        return Point2{wx * std::atan(s) + w * 25.0 * dt, wy * std::atan(s) - w * 100.0 * dt};
    };
    tc.f = [parts](Point2 p) {
        const auto [w, s] = parts(p);
        const double t = std::atan(s);
        const double wx = 16.0 * (1.0 - 2.0 * p.x) * p.y * (1.0 - p.y);
        const double wy = 16.0 * p.x * (1.0 - p.x) * (1.0 - 2.0 * p.y);
        const double lap_w = -32.0 * (p.y * (1.0 - p.y) + p.x * (1.0 - p.x));
        const double dt = 1.0 / (1.0 + s * s);
        const double grad_w_dot_grad_s = 25.0 * wx - 100.0 * wy;
        const double lap_t = -2.0 * s * dt * dt * (25.0 * 25.0 + 100.0 * 100.0);
        return -(lap_w * t + 2.0 * grad_w_dot_grad_s * dt + w * lap_t);
    };
    tc.g = tc.u;
    detail::check_case_consistency(tc);
    return tc;
}

// Manufactured linear solution: the discrete solution must reproduce it at
// the vertices exactly, which drives the end-to-end patch test.
inline TestCase case_linear_patch() {
    TestCase tc;
    tc.name = "patch";
    tc.domain = TestCase::Domain::unit_square;
    tc.u = [](Point2 p) { return 0.3 + 0.7 * p.x - 0.4 * p.y; };
    tc.grad_u = [](Point2) { return Point2{0.7, -0.4}; };
    tc.f = [](Point2) { return 0.0; };
    tc.g = tc.u;
    return tc;
}

inline TestCase make_case(int id) {
    switch (id) {
        case 0: return case_linear_patch();
        case 1: return case1();
        case 2: return case2();
        case 3: return case3();
        case 4: return case4();
    }
    throw Error("make_case: unknown test case " + std::to_string(id));
}

// ---------------------------------------------------------------------------
// Solve + recover on one mesh.
// ---------------------------------------------------------------------------

struct SolveOutput {
    SparseSystem system;
    DofVector u;
    SolveResult linear;
};

inline SolveOutput solve_case(const PolygonMesh& mesh, const TestCase& tc, SolverConfig cfg = {}) {
    SolveOutput out;
    out.system = assemble(mesh, tc.f, tc.g);
    auto [A, b] = reduce_dirichlet(out.system);
    out.linear = cg_solve(A, b, cfg);
    if (!out.linear.converged)
        throw SolverError("solve_case: CG stalled at residual " + std::to_string(out.linear.residual));
    out.u.values = out.linear.x;
    return out;
}

// ---------------------------------------------------------------------------
// Uniform convergence study.
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    int level = 0;
    int n = 0;
    int dof = 0;
    double h = 0.0;
    double h1_error = 0.0;
    double supercloseness = 0.0;
    double recovered_error = 0.0;
    // consecutive-level rates vs DOF (0 on the first level)
    double h1_rate = 0.0;
    double supercloseness_rate = 0.0;
    double recovered_rate = 0.0;
};

inline const std::vector<int>& default_levels() {
    static const std::vector<int> levels{4, 8, 16, 32, 64};
    return levels;
}

inline std::vector<ConvergenceRow> convergence_study(const TestCase& tc, MeshFamily family,
                                                     const std::vector<int>& levels = default_levels(),
                                                     std::uint64_t seed = 1) {
    require(static_cast<bool>(tc.u), "convergence_study: case has no exact solution");
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const int n = levels[k];
        const PolygonMesh mesh = generate(family, n, seed + k);
        const SolveOutput sol = solve_case(mesh, tc);
        const DofVector uI = interpolate(tc.u, mesh);
        const RecoveredField rec = recover_field(mesh, sol.u);

        ConvergenceRow row;
        row.level = static_cast<int>(k);
        row.n = n;
        row.dof = mesh.vertex_count();
        row.h = mesh.h;
        row.h1_error = grad_error_projected(mesh, tc.grad_u, sol.u);
        row.supercloseness = supercloseness(sol.system.A, sol.u, uI);
        row.recovered_error = recovered_error(mesh, tc.grad_u, rec);
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double dlog = std::log(static_cast<double>(row.dof) / prev.dof);
            row.h1_rate = std::log(row.h1_error / prev.h1_error) / dlog;
            row.supercloseness_rate = std::log(row.supercloseness / prev.supercloseness) / dlog;
            row.recovered_rate = std::log(row.recovered_error / prev.recovered_error) / dlog;
        }
        rows.push_back(row);
    }
    return rows;
}

// Least-squares slope of log(err) against log(dof).
inline double fit_loglog_slope(const std::vector<std::pair<double, double>>& dof_err) {
    require(dof_err.size() >= 2, "fit_loglog_slope: need at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [dof, err] : dof_err) {
        const double x = std::log(dof);
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(dof_err.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

template <class Rows, class Extract>
double slope_of(const Rows& rows, Extract&& value, std::size_t last = 0) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t begin = (last > 0 && rows.size() > last) ? rows.size() - last : 0;
    for (std::size_t i = begin; i < rows.size(); ++i)
        pts.emplace_back(static_cast<double>(rows[i].dof), value(rows[i]));
    return fit_loglog_slope(pts);
}

// Expected slopes vs DOF for Test Case 1 at desk scale; tolerance bands are
// the acceptance gates.
struct RateExpectation {
    double h1_slope = -0.5;
    double h1_tol = 0.1;
    double recovered_slope = -1.0;
    double recovered_tol = 0.15;
    double supercloseness_slope = -1.0; // -0.5 on the unstructured/concave families
    double supercloseness_tol = 0.15;
};

inline RateExpectation expected_rates(MeshFamily family) {
    RateExpectation ex;
    if (family == MeshFamily::T3 || family == MeshFamily::T4 || family == MeshFamily::T6)
        ex.supercloseness_slope = -0.5;
    return ex;
}

// ---------------------------------------------------------------------------
// Adaptive study: Solve -> Estimate -> Mark -> Refine.
// ---------------------------------------------------------------------------

struct AdaptiveRow {
    int iter = 0;
    int dof = 0;
    double eta_global = 0.0;
    double h1_error = 0.0;
    double recovered_error = 0.0;
    double kappa = 0.0;
};

struct AdaptiveOptions {
    double theta = kDefaultDorflerTheta;
    int max_iters = 25;
    int dof_budget = 30000;
    SolverConfig solver;
    // called after each refinement with the new mesh and the freshly created cells
    std::function<void(int iter, const PolygonMesh& mesh, const std::vector<int>& created)> on_refined;
};

struct AdaptiveResult {
    std::vector<AdaptiveRow> rows;
    PolygonMesh final_mesh;
};

inline AdaptiveResult adaptive_study(const TestCase& tc, PolygonMesh mesh, AdaptiveOptions opt = {}) {
    AdaptiveResult result;
    for (int iter = 0;; ++iter) {
        const SolveOutput sol = solve_case(mesh, tc, opt.solver);
        const RecoveredField rec = recover_field(mesh, sol.u);
        const IndicatorSet ind = compute_indicators(mesh, sol.u, rec, opt.theta);

        AdaptiveRow row;
        row.iter = iter;
        row.dof = mesh.vertex_count();
        row.eta_global = ind.eta_global;
        if (tc.u) {
            row.h1_error = grad_error_projected(mesh, tc.grad_u, sol.u);
            row.recovered_error = recovered_error(mesh, tc.grad_u, rec);
            row.kappa = (row.h1_error > 0.0) ? ind.eta_global / row.h1_error : 0.0;
        }
        result.rows.push_back(row);

        if (iter >= opt.max_iters || row.dof >= opt.dof_budget || ind.marked.empty()) break;
        RefineResult rr = refine(mesh, ind.marked);
        if (opt.on_refined) opt.on_refined(iter, rr.mesh, rr.created_cells());
        mesh = std::move(rr.mesh);
        require(mesh.vertex_count() > row.dof, "adaptive_study: DOF did not increase");
    }
    result.final_mesh = std::move(mesh);
    return result;
}

} // namespace vemrec

#endif
