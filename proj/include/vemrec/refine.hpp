/// \file refine.hpp
/// \brief Adaptive refinement of marked polygons: connect the barycenter to
///        the center of every planar edge. Collinear edge runs are bisected
///        as one edge, new midpoints appear in unmarked neighbors as hanging
///        (collinear) vertices, and cells whose barycenter cannot see the
///        whole boundary are pre-split into triangles first.
#ifndef VEMREC_REFINE_HPP
#define VEMREC_REFINE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "vemrec/mesh.hpp"

namespace vemrec {

struct RefineResult {
    PolygonMesh mesh;
    std::vector<int> parent_of; // per new cell: the old cell it came from

    std::vector<int> created_cells() const {
        std::vector<int> out;
        for (std::size_t c = 0; c < refined_flag.size(); ++c)
            if (refined_flag[c]) out.push_back(static_cast<int>(c));
        return out;
    }
    std::vector<bool> refined_flag; // per new cell: true when its parent was marked
};

namespace detail {

struct SegmentInsert {
    double t = 0.0; // parameter along the (min id -> max id) direction
    int vertex = -1;
};

using InsertRegistry = std::map<std::pair<int, int>, std::vector<SegmentInsert>>;

inline std::pair<int, int> seg_key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// Does the open segment (c, q) stay inside the polygon (touching only at q)?
inline bool sees_boundary_point(const std::vector<Point2>& pts, Point2 c, Point2 q) {
    const std::size_t n = pts.size();
    const double len = dist(c, q);
    if (len == 0.0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = pts[i], b = pts[(i + 1) % n];
        const double d1 = cross(q - c, a - c);
        const double d2 = cross(q - c, b - c);
        const double eps = 1e-12 * len * dist(a, b);
        if ((d1 > eps && d2 > eps) || (d1 < -eps && d2 < -eps)) continue;
        const double d3 = cross(b - a, c - a);
        const double d4 = cross(b - a, q - a);
        if ((d3 > eps && d4 > eps) || (d3 < -eps && d4 < -eps)) continue;
        // the edge straddles the ray; crossing is harmless only at q itself
        const double denom = cross(b - a, q - c);
        if (std::abs(denom) <= eps) continue; // parallel graze
        const double t = cross(b - a, a - c) / denom; // position on (c, q)
        if (t > 1e-9 && t < 1.0 - 1e-9) return false;
    }
    return true;
}

// The direct barycenter rule is usable when the centroid lies strictly inside
// and every corner and run midpoint is visible from it.
inline bool barycenter_rule_applies(const std::vector<Point2>& verts_all, const std::vector<int>& loop,
                                    const std::vector<PlanarEdge>& runs) {
    std::vector<Point2> pts;
    pts.reserve(loop.size());
    for (int vid : loop) pts.push_back(verts_all[static_cast<std::size_t>(vid)]);
    const auto [area, c] = polygon_area_centroid(pts);
    if (!(area > 0.0)) return false;
    if (!point_in_polygon(pts, c, /*strict=*/true)) return false;
    for (const Point2& q : pts)
        if (!sees_boundary_point(pts, c, q)) return false;
    for (const PlanarEdge& run : runs) {
        const Point2 m = midpoint(verts_all[static_cast<std::size_t>(run.first())],
                                  verts_all[static_cast<std::size_t>(run.last())]);
        if (!sees_boundary_point(pts, c, m)) return false;
    }
    return true;
}

// Is the open segment between boundary vertices at positions pi, pj a valid
// interior diagonal? It must stay strictly inside and avoid every other vertex.
inline bool is_interior_diagonal(const std::vector<Point2>& pts, std::size_t pi, std::size_t pj) {
    const std::size_t n = pts.size();
    const Point2 a = pts[pi], b = pts[pj];
    const double len = dist(a, b);
    if (len == 0.0) return false;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == pi || k == pj) continue;
        if (on_segment(a, b, pts[k], 1e-12 * len)) return false; // grazes a vertex
    }
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t kp = (k + 1) % n;
        if (k == pi || k == pj || kp == pi || kp == pj) continue;
        if (segments_intersect(a, b, pts[k], pts[kp], 1e-13 * len)) return false;
    }
    return point_in_polygon(pts, midpoint(a, b), /*strict=*/true);
}

} // namespace detail

// Refine the marked cells; unmarked neighbors acquire the split midpoints as
// collinear vertices so the result stays vertex-to-vertex conforming.
inline RefineResult refine(const PolygonMesh& mesh, const std::vector<int>& marked_in) {
    std::vector<int> marked = marked_in;
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    for (int c : marked)
        if (c < 0 || c >= mesh.cell_count()) throw MeshError("refine: marked cell out of range");
    std::vector<bool> is_marked(static_cast<std::size_t>(mesh.cell_count()), false);
    for (int c : marked) is_marked[static_cast<std::size_t>(c)] = true;

    std::vector<Point2> verts = mesh.vertices;
    detail::InsertRegistry inserts;

    auto seg_param = [&](int u, int v, Point2 p) {
        const Point2 a = verts[static_cast<std::size_t>(u)];
        const Point2 d = verts[static_cast<std::size_t>(v)] - a;
        return dot(p - a, d) / dot(d, d);
    };

    // Reuse an existing chain vertex or a previously created insert when the
    // run midpoint coincides with it; otherwise create and register.
    auto split_vertex = [&](const PlanarEdge& run) {
        const Point2 m = midpoint(verts[static_cast<std::size_t>(run.first())],
                                  verts[static_cast<std::size_t>(run.last())]);
        const double run_len = dist(verts[static_cast<std::size_t>(run.first())],
                                    verts[static_cast<std::size_t>(run.last())]);
        const double tol = 1e-9 * run_len;
        for (int vid : run.chain)
            if (dist(verts[static_cast<std::size_t>(vid)], m) <= tol) return vid;
        for (std::size_t k = 0; k + 1 < run.chain.size(); ++k) {
            const int u = run.chain[k];
            const int v = run.chain[k + 1];
            const double t = seg_param(u, v, m);
            if (t < -1e-12 || t > 1.0 + 1e-12) continue;
            const auto key = detail::seg_key(u, v);
            auto& list = inserts[key];
            const double t_lo = seg_param(key.first, key.second, m);
            for (const auto& ins : list)
                if (dist(verts[static_cast<std::size_t>(ins.vertex)], m) <= tol) return ins.vertex;
            const int id = static_cast<int>(verts.size());
            verts.push_back(m);
            list.push_back({t_lo, id});
            return id;
        }
        throw MeshError("refine: split midpoint not on its planar run");
    };

    struct Piece {
        std::vector<int> loop;
        std::vector<PlanarEdge> runs;
        std::vector<int> splits; // one vertex id per run
        int bary = -1;
    };
    std::map<int, std::vector<Piece>> plans;

    auto make_piece = [&](std::vector<int> loop) {
        Piece piece;
        piece.loop = std::move(loop);
        piece.runs = planar_runs(verts, piece.loop);
        for (const PlanarEdge& run : piece.runs) piece.splits.push_back(split_vertex(run));
        std::vector<Point2> pts;
        for (int vid : piece.loop) pts.push_back(verts[static_cast<std::size_t>(vid)]);
        piece.bary = static_cast<int>(verts.size());
        verts.push_back(polygon_area_centroid(pts).second);
        return piece;
    };

    for (int c : marked) {
        std::vector<Piece>& pieces = plans[c];
        // Pre-split by interior diagonals between corners until every piece is
        // barycenter-splittable; every original vertex stays on its piece, so
        // the piece interfaces remain vertex-to-vertex conforming.
        std::vector<std::vector<int>> pending{mesh.cells[static_cast<std::size_t>(c)].v};
        int guard = 0;
        while (!pending.empty()) {
            require(++guard < 64 * static_cast<int>(mesh.cells[static_cast<std::size_t>(c)].v.size()),
                    "refine: pre-splitting did not terminate on cell " + std::to_string(c));
            std::vector<int> loop = std::move(pending.back());
            pending.pop_back();
            const auto runs = planar_runs(verts, loop);
            if (detail::barycenter_rule_applies(verts, loop, runs)) {
                pieces.push_back(make_piece(std::move(loop)));
                continue;
            }
            std::vector<Point2> pts;
            pts.reserve(loop.size());
            for (int vid : loop) pts.push_back(verts[static_cast<std::size_t>(vid)]);
            std::vector<std::size_t> corner_pos;
            for (const PlanarEdge& run : runs) {
                const auto it = std::find(loop.begin(), loop.end(), run.first());
                corner_pos.push_back(static_cast<std::size_t>(it - loop.begin()));
            }
            // best diagonal: the valid corner pair with the most balanced split
            double best_score = -1.0;
            std::size_t best_i = 0, best_j = 0;
            for (std::size_t a = 0; a < corner_pos.size(); ++a)
                for (std::size_t b = a + 1; b < corner_pos.size(); ++b) {
                    if ((a + 1) % corner_pos.size() == b || (b + 1) % corner_pos.size() == a)
                        continue; // adjacent corners: boundary, not a diagonal
                    const std::size_t pi = corner_pos[a], pj = corner_pos[b];
                    if (!detail::is_interior_diagonal(pts, pi, pj)) continue;
                    std::vector<Point2> half;
                    for (std::size_t k = pi;; k = (k + 1) % loop.size()) {
                        half.push_back(pts[k]);
                        if (k == pj) break;
                    }
                    const double a1 = polygon_signed_area(half);
                    const double a2 = polygon_signed_area(pts) - a1;
                    const double score = std::min(a1, a2);
                    if (score > best_score) {
                        best_score = score;
                        best_i = pi;
                        best_j = pj;
                    }
                }
            if (best_score <= 0.0)
                throw MeshError("refine: no interior diagonal splits cell " + std::to_string(c));
            std::vector<int> first, second;
            for (std::size_t k = best_i;; k = (k + 1) % loop.size()) {
                first.push_back(loop[k]);
                if (k == best_j) break;
            }
            for (std::size_t k = best_j;; k = (k + 1) % loop.size()) {
                second.push_back(loop[k]);
                if (k == best_i) break;
            }
            pending.push_back(std::move(first));
            pending.push_back(std::move(second));
        }
    }

    // Splice the registered inserts into a boundary walk of any loop.
    auto augmented_loop = [&](const std::vector<int>& loop) {
        std::vector<int> out;
        const std::size_t m = loop.size();
        for (std::size_t k = 0; k < m; ++k) {
            const int a = loop[k];
            const int b = loop[(k + 1) % m];
            out.push_back(a);
            const auto it = inserts.find(detail::seg_key(a, b));
            if (it == inserts.end()) continue;
            std::vector<detail::SegmentInsert> list = it->second;
            std::sort(list.begin(), list.end(),
                      [](const auto& x, const auto& y) { return x.t < y.t; });
            if (a > b) std::reverse(list.begin(), list.end());
            for (const auto& ins : list) out.push_back(ins.vertex);
        }
        return out;
    };

    std::vector<PolygonCell> new_cells;
    RefineResult result;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        if (is_marked[static_cast<std::size_t>(c)]) continue;
        new_cells.push_back({augmented_loop(mesh.cells[static_cast<std::size_t>(c)].v)});
        result.parent_of.push_back(c);
        result.refined_flag.push_back(false);
    }
    for (int c : marked) {
        for (const Piece& piece : plans[c]) {
            const std::vector<int> aug = augmented_loop(piece.loop);
            std::vector<int> positions;
            for (int split : piece.splits) {
                const auto it = std::find(aug.begin(), aug.end(), split);
                require(it != aug.end(), "refine: split vertex missing from augmented loop");
                positions.push_back(static_cast<int>(it - aug.begin()));
            }
            std::sort(positions.begin(), positions.end());
            const int k = static_cast<int>(positions.size());
            const int m = static_cast<int>(aug.size());
            for (int r = 0; r < k; ++r) {
                const int from = positions[static_cast<std::size_t>(r)];
                const int to = positions[static_cast<std::size_t>((r + 1) % k)];
                PolygonCell child;
                child.v.push_back(piece.bary);
                for (int pos = from;; pos = (pos + 1) % m) {
                    child.v.push_back(aug[static_cast<std::size_t>(pos)]);
                    if (pos == to && child.v.size() > 2) break;
                }
                new_cells.push_back(std::move(child));
                result.parent_of.push_back(c);
                result.refined_flag.push_back(true);
            }
        }
    }

    result.mesh = build_topology(std::move(verts), std::move(new_cells), mesh.meta);
    const double before = mesh.total_area();
    const double after = result.mesh.total_area();
    if (std::abs(after - before) > 1e-12 * std::abs(before))
        throw MeshError("refine: total area not conserved");
    return result;
}

} // namespace vemrec

#endif
