/// \file geometry.hpp
/// \brief Planar points and polygon primitives: area, centroid, simplicity,
///        collinearity, half-plane clipping and ear-clipping triangulation.
#ifndef VEMREC_GEOMETRY_HPP
#define VEMREC_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vemrec/common.hpp"

namespace vemrec {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Scale-free collinearity test: |cross(v-u, w-u)| <= tol * |v-u| * |w-u|.
inline constexpr double kCollinearTol = 1e-10;

inline bool collinear(Point2 u, Point2 v, Point2 w, double tol = kCollinearTol) {
    const Point2 a = v - u;
    const Point2 b = w - u;
    return std::abs(cross(a, b)) <= tol * norm(a) * norm(b);
}

// Signed area by the shoelace formula; positive for CCW boundaries.
inline double polygon_signed_area(std::span<const Point2> poly) {
    double twice = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

// Area and area centroid of a simple polygon (not the vertex average).
inline std::pair<double, Point2> polygon_area_centroid(std::span<const Point2> poly) {
    double twice = 0.0;
    double cx = 0.0, cy = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        const double w = p.x * q.y - q.x * p.y;
        twice += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    const double area = 0.5 * twice;
    if (area == 0.0) return {0.0, Point2{}};
    return {area, Point2{cx / (3.0 * twice), cy / (3.0 * twice)}};
}

inline double polygon_diameter(std::span<const Point2> poly) {
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, dist(poly[i], poly[j]));
    return d;
}

namespace detail {

// Orientation of c relative to segment a->b: >0 left, <0 right, 0 on line.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

inline bool on_segment(Point2 a, Point2 b, Point2 p, double eps) {
    if (std::abs(orient(a, b, p)) > eps) return false;
    return std::min(a.x, b.x) - eps <= p.x && p.x <= std::max(a.x, b.x) + eps &&
           std::min(a.y, b.y) - eps <= p.y && p.y <= std::max(a.y, b.y) + eps;
}

// Proper or improper intersection of open segments (shared endpoints excluded
// by the caller via adjacency).
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
    const double d1 = orient(c, d, a);
    const double d2 = orient(c, d, b);
    const double d3 = orient(a, b, c);
    const double d4 = orient(a, b, d);
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
        ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    if (std::abs(d1) <= eps && on_segment(c, d, a, eps)) return true;
    if (std::abs(d2) <= eps && on_segment(c, d, b, eps)) return true;
    if (std::abs(d3) <= eps && on_segment(a, b, c, eps)) return true;
    if (std::abs(d4) <= eps && on_segment(a, b, d, eps)) return true;
    return false;
}

} // namespace detail

// A polygon boundary is simple when non-adjacent edges do not meet and
// adjacent edges meet only in their shared vertex. Collinear consecutive
// vertices (hanging nodes) are permitted.
inline bool polygon_is_simple(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, dist(poly[i], poly[(i + 1) % n]));
    const double eps = 1e-14 * scale;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly[(i + 1) % n];
        if (dist(a, b) <= eps) return false; // zero-length edge
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const Point2 c = poly[j], d = poly[(j + 1) % n];
            if (adjacent) {
                // Shared vertex only: the far endpoints must not sit on the other edge.
                const Point2 shared = (j == i + 1) ? b : a;
                const Point2 a_far = (j == i + 1) ? a : b;
                const Point2 d_far = (j == i + 1) ? d : c;
                if (detail::on_segment(c, d, a_far, eps) && dist(a_far, shared) > eps) return false;
                if (detail::on_segment(a, b, d_far, eps) && dist(d_far, shared) > eps) return false;
            } else {
                if (detail::segments_intersect(a, b, c, d, eps)) return false;
            }
        }
    }
    return true;
}

inline bool polygon_is_convex(std::span<const Point2> poly, double tol = kCollinearTol) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 u = poly[i], v = poly[(i + 1) % n], w = poly[(i + 2) % n];
        const Point2 a = v - u, b = w - v;
        if (cross(a, b) < -tol * norm(a) * norm(b)) return false;
    }
    return true;
}

// Winding-number point-in-polygon; boundary points count as outside when
// `strict` (used to validate refinement split points).
inline bool point_in_polygon(std::span<const Point2> poly, Point2 p, bool strict = false) {
    const std::size_t n = poly.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, dist(poly[i], poly[(i + 1) % n]));
    const double eps = 1e-13 * scale;
    int winding = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly[(i + 1) % n];
        if (detail::on_segment(a, b, p, eps)) return !strict;
        if (a.y <= p.y) {
            if (b.y > p.y && detail::orient(a, b, p) > 0) ++winding;
        } else {
            if (b.y <= p.y && detail::orient(a, b, p) < 0) --winding;
        }
    }
    return winding != 0;
}

// Clip a convex or simple polygon against the half-plane dot(n, p - a) <= 0.
// Sutherland-Hodgman step; output may be empty.
inline std::vector<Point2> clip_halfplane(std::span<const Point2> poly, Point2 a, Point2 n) {
    std::vector<Point2> out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    out.reserve(m + 2);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 p = poly[i];
        const Point2 q = poly[(i + 1) % m];
        const double dp = dot(n, p - a);
        const double dq = dot(n, q - a);
        if (dp <= 0.0) {
            out.push_back(p);
            if (dq > 0.0) {
                const double t = dp / (dp - dq);
                out.push_back(p + t * (q - p));
            }
        } else if (dq <= 0.0) {
            const double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

// Drop consecutive duplicate points (within eps); keeps orientation.
inline std::vector<Point2> dedup_ring(std::span<const Point2> poly, double eps) {
    std::vector<Point2> out;
    for (const Point2& p : poly) {
        if (out.empty() || dist(out.back(), p) > eps) out.push_back(p);
    }
    while (out.size() > 1 && dist(out.front(), out.back()) <= eps) out.pop_back();
    return out;
}

// Ear-clipping triangulation of a simple CCW polygon. Collinear vertices are
// removed up front (they do not change the covered region); returned triangles
// index into the *input* vertex list.
inline std::vector<std::array<int, 3>> ear_clip_triangulate(std::span<const Point2> poly) {
    const int n = static_cast<int>(poly.size());
    require(n >= 3, "ear_clip: need at least 3 vertices");
    std::vector<int> idx;
    idx.reserve(n);
    for (int i = 0; i < n; ++i) idx.push_back(i);

    // strip exactly-collinear chain vertices
    for (bool again = true; again && idx.size() > 3;) {
        again = false;
        for (std::size_t k = 0; k < idx.size() && idx.size() > 3; ++k) {
            const Point2 u = poly[idx[(k + idx.size() - 1) % idx.size()]];
            const Point2 v = poly[idx[k]];
            const Point2 w = poly[idx[(k + 1) % idx.size()]];
            if (collinear(u, v, w) && dot(v - u, w - v) > 0.0) {
                idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
                again = true;
                break;
            }
        }
    }

    std::vector<std::array<int, 3>> tris;
    tris.reserve(idx.size() - 2);
    int guard = 0;
    const int guard_max = 4 * n * n + 16;
    while (idx.size() > 3) {
        require(++guard < guard_max, "ear_clip: no ear found (polygon not simple?)");
        bool clipped = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const std::size_t km = (k + idx.size() - 1) % idx.size();
            const std::size_t kp = (k + 1) % idx.size();
            const Point2 u = poly[idx[km]], v = poly[idx[k]], w = poly[idx[kp]];
            if (detail::orient(u, v, w) <= 0.0) continue; // reflex or degenerate corner
            bool contains_other = false;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (j == km || j == k || j == kp) continue;
                const Point2 p = poly[idx[j]];
                if (detail::orient(u, v, p) >= 0.0 && detail::orient(v, w, p) >= 0.0 &&
                    detail::orient(w, u, p) >= 0.0) {
                    contains_other = true;
                    break;
                }
            }
            if (contains_other) continue;
            tris.push_back({idx[km], idx[k], idx[kp]});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
            clipped = true;
            break;
        }
        if (clipped) continue;
        // clipping may leave a straight-through chain (collinear remainder);
        // dropping such a vertex keeps the covered region unchanged
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const Point2 u = poly[idx[(k + idx.size() - 1) % idx.size()]];
            const Point2 v = poly[idx[k]];
            const Point2 w = poly[idx[(k + 1) % idx.size()]];
            if (collinear(u, v, w, 1e-13) && dot(v - u, w - v) > 0.0) {
                idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
                clipped = true;
                break;
            }
        }
        require(clipped, "ear_clip: stuck (polygon not simple?)");
    }
    if (detail::orient(poly[idx[0]], poly[idx[1]], poly[idx[2]]) > 0.0)
        tris.push_back({idx[0], idx[1], idx[2]});
    require(!tris.empty(), "ear_clip: degenerate polygon");
    return tris;
}

// Sub-triangulation used for quadrature and split-point fallbacks: centroid
// fan for convex cells, ear clipping otherwise. Triangles are coordinate
// triples; the fan introduces the centroid as an extra point.
inline std::vector<std::array<Point2, 3>> triangulate_polygon(std::span<const Point2> poly) {
    std::vector<std::array<Point2, 3>> tris;
    if (polygon_is_convex(poly)) {
        const auto [area, c] = polygon_area_centroid(poly);
        (void)area;
        const std::size_t n = poly.size();
        tris.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = poly[i], b = poly[(i + 1) % n];
            if (std::abs(detail::orient(c, a, b)) > 0.0) tris.push_back({c, a, b});
        }
    } else {
        for (const auto& t : ear_clip_triangulate(poly))
            tris.push_back({poly[t[0]], poly[t[1]], poly[t[2]]});
    }
    return tris;
}

} // namespace vemrec

#endif
