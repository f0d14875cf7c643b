/// \file norms.hpp
/// \brief Error norms of the benchmark section: projected-gradient error,
///        projected recovered-gradient error and the stiffness-matrix
///        supercloseness norm.
#ifndef VEMREC_NORMS_HPP
#define VEMREC_NORMS_HPP

#include <cmath>
#include <vector>

#include "vemrec/vem.hpp"

namespace vemrec {

struct RecoveredField {
    DofVector gx;
    DofVector gy;
};

inline double integrate_cell(const PolygonMesh& mesh, int cell_id, const ScalarField& g,
                             int degree = kDefaultQuadDegree) {
    return integrate_polygon(mesh.cell_points(cell_id), g, degree);
}

// || grad u - grad Pi0 u_h ||_{0,Omega}: per cell the discrete gradient is the
// constant gradient of the projected solution.
inline double grad_error_projected(const PolygonMesh& mesh, const VectorField& exact_grad,
                                   const DofVector& u_dofs, int degree = kDefaultQuadDegree) {
    double total = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const LinearPoly p = pi_nabla_on_cell(mesh, c, u_dofs);
        const Point2 g{p.cx, p.cy};
        total += integrate_polygon(mesh.cell_points(c), [&](Point2 x) {
            const Point2 e = exact_grad(x) - g;
            return e.x * e.x + e.y * e.y;
        }, degree);
    }
    return std::sqrt(total);
}

// || grad u - Pi0 G_h u_h ||_{0,Omega}: the recovered field is projected
// component-wise onto linears on each cell before comparing.
inline double recovered_error(const PolygonMesh& mesh, const VectorField& exact_grad,
                              const RecoveredField& recovered, int degree = kDefaultQuadDegree) {
    double total = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const LinearPoly px = pi_nabla_on_cell(mesh, c, recovered.gx);
        const LinearPoly py = pi_nabla_on_cell(mesh, c, recovered.gy);
        total += integrate_polygon(mesh.cell_points(c), [&](Point2 x) {
            const Point2 g = exact_grad(x);
            const double ex = g.x - px.eval(x);
            const double ey = g.y - py.eval(x);
            return ex * ex + ey * ey;
        }, degree);
    }
    return std::sqrt(total);
}

// || grad u_h - grad u_I ||_{0,Omega} = sqrt((u_h - u_I)^T A_h (u_h - u_I))
// with the full stabilized stiffness matrix on all dofs.
inline double supercloseness(const CsrMatrix& A_full, const DofVector& u_dofs, const DofVector& uI_dofs) {
    require(u_dofs.size() == A_full.n && uI_dofs.size() == A_full.n, "supercloseness: size mismatch");
    std::vector<double> d(static_cast<std::size_t>(A_full.n));
    for (int i = 0; i < A_full.n; ++i) d[static_cast<std::size_t>(i)] = u_dofs[i] - uI_dofs[i];
    const double q = A_full.quadratic_form(d, d);
    if (q < -1e-13) throw Error("supercloseness: quadratic form negative (symmetry/PSD violation)");
    return std::sqrt(std::max(q, 0.0));
}

} // namespace vemrec

#endif
