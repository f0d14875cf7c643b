/// \file quadrature.hpp
/// \brief Polygon quadrature: Gauss-Legendre points collapsed onto the
///        reference triangle (Duffy map) and sub-triangulated cell integrals.
#ifndef VEMREC_QUADRATURE_HPP
#define VEMREC_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vemrec/geometry.hpp"

namespace vemrec {

inline constexpr int kDefaultQuadDegree = 4;
inline constexpr int kOracleQuadDegree = 10;

struct QuadratureRule {
    std::vector<Point2> points; // on reference triangle (0,0),(1,0),(0,1)
    std::vector<double> weights; // sum to 1/2 (reference area)
    int degree = 0;
};

namespace detail {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
inline void gauss_legendre_01(int npts, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(npts), 0.0);
    w.assign(static_cast<std::size_t>(npts), 0.0);
    for (int i = 0; i < npts; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= npts; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = npts * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[static_cast<std::size_t>(npts - 1 - i)] = 0.5 * (1.0 + t);
        w[static_cast<std::size_t>(npts - 1 - i)] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace detail

// Rule exact for bivariate polynomials up to `degree` on the reference
// triangle. Built from a tensor Gauss grid through the Duffy transform
// x = u, y = v(1-u); the extra (1-u) Jacobian raises the u-degree by one.
namespace detail {

inline QuadratureRule build_triangle_rule(int degree) {
    const int k = std::max(1, (degree + 3) / 2); // 2k-1 >= degree+1
    std::vector<double> gx, gw;
    gauss_legendre_01(k, gx, gw);
    QuadratureRule rule;
    rule.degree = degree;
    rule.points.reserve(static_cast<std::size_t>(k) * k);
    rule.weights.reserve(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double u = gx[static_cast<std::size_t>(i)];
            const double v = gx[static_cast<std::size_t>(j)];
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(gw[static_cast<std::size_t>(i)] * gw[static_cast<std::size_t>(j)] * (1.0 - u));
        }
    }
    return rule;
}

} // namespace detail

inline const QuadratureRule& triangle_rule(int degree) {
    constexpr int kMaxCached = 12;
    static const std::vector<QuadratureRule> cache = [] {
        std::vector<QuadratureRule> rules;
        for (int d = 0; d <= kMaxCached; ++d) rules.push_back(detail::build_triangle_rule(d));
        return rules;
    }();
    require(degree >= 0 && degree <= kMaxCached, "triangle_rule: unsupported degree");
    return cache[static_cast<std::size_t>(degree)];
}

inline double integrate_triangle(const QuadratureRule& rule, Point2 a, Point2 b, Point2 c,
                                 const std::function<double(Point2)>& g) {
    const Point2 e1 = b - a;
    const Point2 e2 = c - a;
    const double jac = cross(e1, e2); // twice signed area
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point2 r = rule.points[q];
        const Point2 p = a + r.x * e1 + r.y * e2;
        s += rule.weights[q] * g(p);
    }
    return s * jac;
}

// Integral of g over a simple CCW polygon by sub-triangulation (centroid fan
// when convex, ear clipping otherwise). Exact for polynomials up to `degree`.
inline double integrate_polygon(std::span<const Point2> poly, const std::function<double(Point2)>& g,
                                int degree = kDefaultQuadDegree) {
    const QuadratureRule& rule = triangle_rule(degree);
    const double h2 = polygon_diameter(poly);
    double s = 0.0;
    for (const auto& t : triangulate_polygon(poly)) {
        const double area2 = cross(t[1] - t[0], t[2] - t[0]);
        if (std::abs(area2) < 2e-14 * h2 * h2) continue; // degenerate sliver
        require(area2 > 0.0, "integrate_polygon: flipped sub-triangle");
        s += integrate_triangle(rule, t[0], t[1], t[2], g);
    }
    return s;
}

} // namespace vemrec

#endif
