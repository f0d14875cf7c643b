/// \file estimator.hpp
/// \brief Recovery-based a posteriori error indicator
///        eta_{h,E} = || Pi0 G_h u_h - grad Pi0 u_h ||_{0,E},
///        effectivity index and minimal-cardinality Doerfler bulk marking.
#ifndef VEMREC_ESTIMATOR_HPP
#define VEMREC_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "vemrec/norms.hpp"
#include "vemrec/recovery.hpp"

namespace vemrec {

inline constexpr double kDefaultDorflerTheta = 0.4;

struct IndicatorSet {
    std::vector<double> eta; // per cell
    double eta_global = 0.0;
    double theta = kDefaultDorflerTheta;
    std::vector<int> marked; // ascending cell ids
};

inline double local_indicator(const PolygonMesh& mesh, int cell_id, const DofVector& u_dofs,
                              const RecoveredField& recovered, int degree = kDefaultQuadDegree) {
    const LocalElement el = build_local_element(mesh, cell_id);
    std::vector<double> du, dx, dy;
    du.reserve(el.vertex_ids.size());
    dx.reserve(el.vertex_ids.size());
    dy.reserve(el.vertex_ids.size());
    for (int vid : el.vertex_ids) {
        du.push_back(u_dofs[vid]);
        dx.push_back(recovered.gx[vid]);
        dy.push_back(recovered.gy[vid]);
    }
    const LinearPoly pu = pi_nabla(el, du);
    const LinearPoly px = pi_nabla(el, dx);
    const LinearPoly py = pi_nabla(el, dy);
    const double eta2 = integrate_polygon(mesh.cell_points(cell_id), [&](Point2 p) {
        const double ex = px.eval(p) - pu.cx;
        const double ey = py.eval(p) - pu.cy;
        return ex * ex + ey * ey;
    }, degree);
    return std::sqrt(std::max(eta2, 0.0));
}

// Shortest descending-eta prefix with sum of squares >= theta^2 * total;
// ties broken by cell id, zero indicators never marked.
inline std::vector<int> dorfler_mark(std::span<const double> eta, double theta) {
    require(theta > 0.0 && theta <= 1.0, "dorfler_mark: theta must be in (0,1]");
    double total2 = 0.0;
    for (double e : eta) total2 += e * e;
    std::vector<int> order(eta.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (eta[static_cast<std::size_t>(a)] != eta[static_cast<std::size_t>(b)])
            return eta[static_cast<std::size_t>(a)] > eta[static_cast<std::size_t>(b)];
        return a < b;
    });
    std::vector<int> marked;
    if (total2 <= 0.0) return marked;
    const double target = theta * theta * total2;
    double cum = 0.0;
    for (int c : order) {
        if (eta[static_cast<std::size_t>(c)] <= 0.0) break;
        marked.push_back(c);
        cum += eta[static_cast<std::size_t>(c)] * eta[static_cast<std::size_t>(c)];
        if (cum >= target) break;
    }
    std::sort(marked.begin(), marked.end());
    return marked;
}

inline IndicatorSet compute_indicators(const PolygonMesh& mesh, const DofVector& u_dofs,
                                       const RecoveredField& recovered,
                                       double theta = kDefaultDorflerTheta) {
    IndicatorSet set;
    set.theta = theta;
    set.eta.resize(static_cast<std::size_t>(mesh.cell_count()));
    double total2 = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        set.eta[static_cast<std::size_t>(c)] = local_indicator(mesh, c, u_dofs, recovered);
        total2 += set.eta[static_cast<std::size_t>(c)] * set.eta[static_cast<std::size_t>(c)];
    }
    set.eta_global = std::sqrt(total2);
    set.marked = dorfler_mark(set.eta, theta);
    return set;
}

// kappa_h = eta_h / || grad u - grad Pi0 u_h ||_{0,Omega}.
inline double effectivity(const PolygonMesh& mesh, const VectorField& exact_grad,
                          const DofVector& u_dofs, const RecoveredField& recovered,
                          int degree = kDefaultQuadDegree) {
    double numer2 = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const double e = local_indicator(mesh, c, u_dofs, recovered, degree);
        numer2 += e * e;
    }
    const double denom = grad_error_projected(mesh, exact_grad, u_dofs, degree);
    if (denom <= 1e-14 * (1.0 + std::sqrt(numer2)))
        throw Error("effectivity: exact solution lies in the discrete space (zero denominator)");
    return std::sqrt(numer2) / denom;
}

} // namespace vemrec

#endif
