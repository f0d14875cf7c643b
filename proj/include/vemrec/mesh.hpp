/// \file mesh.hpp
/// \brief Polygonal mesh container: cells are CCW vertex loops, hanging nodes
///        appear as collinear vertices in every incident cell, and the edge
///        table therefore matches vertex-to-vertex.
#ifndef VEMREC_MESH_HPP
#define VEMREC_MESH_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vemrec/geometry.hpp"

namespace vemrec {

struct PolygonCell {
    std::vector<int> v; // CCW vertex indices, length >= 3
};

struct MeshEdge {
    int a = -1;
    int b = -1;
    int left = -1;  // cell traversing a->b
    int right = -1; // cell traversing b->a, -1 on the boundary
};

struct MeshMeta {
    std::string family; // empty when not generator-produced
    int n = 0;
    std::uint64_t seed = 0;
};

struct PolygonMesh {
    std::vector<Point2> vertices;
    std::vector<PolygonCell> cells;
    std::vector<MeshEdge> edges;
    std::vector<bool> boundary_vertex;
    double h = 0.0; // max cell diameter
    MeshMeta meta;

    // derived adjacency, filled by build_topology
    std::vector<std::vector<int>> vertex_cells;      // sorted cell ids per vertex
    std::vector<std::vector<int>> cell_edge_neighbor; // per cell, per boundary segment: other cell or -1

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int cell_count() const { return static_cast<int>(cells.size()); }

    std::vector<Point2> cell_points(int c) const {
        std::vector<Point2> p;
        p.reserve(cells[static_cast<std::size_t>(c)].v.size());
        for (int vid : cells[static_cast<std::size_t>(c)].v) p.push_back(vertices[static_cast<std::size_t>(vid)]);
        return p;
    }

    double total_area() const {
        double s = 0.0;
        for (int c = 0; c < cell_count(); ++c) s += polygon_signed_area(cell_points(c));
        return s;
    }
};

// Exact area and area centroid of one cell (collinear vertices are harmless).
inline std::pair<double, Point2> cell_area_centroid(const PolygonMesh& mesh, int cell_id) {
    const auto pts = mesh.cell_points(cell_id);
    const auto [area, c] = polygon_area_centroid(pts);
    if (!(area > 1e-14 * mesh.h * mesh.h))
        throw MeshError("cell_area_centroid: degenerate cell " + std::to_string(cell_id));
    return {area, c};
}

// Assemble the derived topology from raw vertex/cell lists and validate the
// PolygonMesh invariants. Throws MeshError naming the offending entity.
inline PolygonMesh build_topology(std::vector<Point2> vertices, std::vector<PolygonCell> cells,
                                  MeshMeta meta = {}) {
    PolygonMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.cells = std::move(cells);
    mesh.meta = std::move(meta);

    const int nv = mesh.vertex_count();
    const int nc = mesh.cell_count();
    if (nc == 0) throw MeshError("build_topology: no cells");

    mesh.h = 0.0;
    for (int c = 0; c < nc; ++c) {
        const auto& cv = mesh.cells[static_cast<std::size_t>(c)].v;
        if (cv.size() < 3) throw MeshError("build_topology: cell " + std::to_string(c) + " has fewer than 3 vertices");
        std::vector<int> sorted = cv;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw MeshError("build_topology: cell " + std::to_string(c) + " repeats a vertex");
        for (int vid : cv)
            if (vid < 0 || vid >= nv)
                throw MeshError("build_topology: cell " + std::to_string(c) + " references vertex " + std::to_string(vid));
        const auto pts = mesh.cell_points(c);
        if (polygon_signed_area(pts) <= 0.0)
            throw MeshError("build_topology: cell " + std::to_string(c) + " is not CCW / has nonpositive area");
        if (!polygon_is_simple(pts))
            throw MeshError("build_topology: cell " + std::to_string(c) + " has a self-intersecting boundary");
        mesh.h = std::max(mesh.h, polygon_diameter(pts));
    }

    // Edge table keyed by unordered vertex pair; each key must appear once
    // (boundary) or twice with opposite orientations (interior).
    std::map<std::pair<int, int>, MeshEdge> table;
    for (int c = 0; c < nc; ++c) {
        const auto& cv = mesh.cells[static_cast<std::size_t>(c)].v;
        const std::size_t m = cv.size();
        for (std::size_t k = 0; k < m; ++k) {
            const int a = cv[k];
            const int b = cv[(k + 1) % m];
            const auto key = std::minmax(a, b);
            auto [it, inserted] = table.try_emplace({key.first, key.second});
            MeshEdge& e = it->second;
            if (inserted) {
                e.a = a;
                e.b = b;
                e.left = c;
            } else {
                if (e.right != -1 || e.a != b || e.b != a)
                    throw MeshError("build_topology: edge (" + std::to_string(key.first) + "," +
                                    std::to_string(key.second) + ") shared inconsistently");
                e.right = c;
            }
        }
    }

    mesh.edges.reserve(table.size());
    for (auto& [key, e] : table) mesh.edges.push_back(e);

    mesh.boundary_vertex.assign(static_cast<std::size_t>(nv), false);
    for (const MeshEdge& e : mesh.edges)
        if (e.right == -1) {
            mesh.boundary_vertex[static_cast<std::size_t>(e.a)] = true;
            mesh.boundary_vertex[static_cast<std::size_t>(e.b)] = true;
        }

    // A non-conforming interface shows up as two unmatched edges overlapping
    // collinearly (a refined side facing an unsplit one). True boundary edges
    // never overlap another edge over a positive length.
    {
        std::vector<const MeshEdge*> open;
        for (const MeshEdge& e : mesh.edges)
            if (e.right == -1) open.push_back(&e);
        for (std::size_t i = 0; i < open.size(); ++i)
            for (std::size_t j = i + 1; j < open.size(); ++j) {
                const Point2 a = mesh.vertices[static_cast<std::size_t>(open[i]->a)];
                const Point2 b = mesh.vertices[static_cast<std::size_t>(open[i]->b)];
                const Point2 c = mesh.vertices[static_cast<std::size_t>(open[j]->a)];
                const Point2 d = mesh.vertices[static_cast<std::size_t>(open[j]->b)];
                if (!collinear(a, b, c) || !collinear(a, b, d)) continue;
                const Point2 dir = b - a;
                const double len2 = dot(dir, dir);
                double t0 = dot(c - a, dir) / len2;
                double t1 = dot(d - a, dir) / len2;
                if (t0 > t1) std::swap(t0, t1);
                const double overlap = std::min(1.0, t1) - std::max(0.0, t0);
                if (overlap > 1e-9)
                    throw MeshError("build_topology: non-conforming edge (" + std::to_string(open[i]->a) +
                                    "," + std::to_string(open[i]->b) + ") overlaps edge (" +
                                    std::to_string(open[j]->a) + "," + std::to_string(open[j]->b) + ")");
            }
    }

    mesh.vertex_cells.assign(static_cast<std::size_t>(nv), {});
    for (int c = 0; c < nc; ++c)
        for (int vid : mesh.cells[static_cast<std::size_t>(c)].v)
            mesh.vertex_cells[static_cast<std::size_t>(vid)].push_back(c);
    for (auto& vc : mesh.vertex_cells) std::sort(vc.begin(), vc.end());

    for (int vid = 0; vid < nv; ++vid)
        if (mesh.vertex_cells[static_cast<std::size_t>(vid)].empty())
            throw MeshError("build_topology: vertex " + std::to_string(vid) + " is unused");

    mesh.cell_edge_neighbor.assign(static_cast<std::size_t>(nc), {});
    for (int c = 0; c < nc; ++c) {
        const auto& cv = mesh.cells[static_cast<std::size_t>(c)].v;
        auto& nb = mesh.cell_edge_neighbor[static_cast<std::size_t>(c)];
        nb.resize(cv.size(), -1);
        for (std::size_t k = 0; k < cv.size(); ++k) {
            const auto key = std::minmax(cv[k], cv[(k + 1) % cv.size()]);
            const MeshEdge& e = table.at({key.first, key.second});
            nb[k] = (e.left == c) ? e.right : e.left;
        }
    }
    return mesh;
}

// A maximal run of collinear boundary edges of one cell, treated as a single
// edge during refinement. `chain` lists vertex ids corner-to-corner inclusive.
struct PlanarEdge {
    std::vector<int> chain;

    int first() const { return chain.front(); }
    int last() const { return chain.back(); }
    int edge_count() const { return static_cast<int>(chain.size()) - 1; }
};

inline Point2 planar_edge_midpoint(const PolygonMesh& mesh, const PlanarEdge& run) {
    return midpoint(mesh.vertices[static_cast<std::size_t>(run.first())],
                    mesh.vertices[static_cast<std::size_t>(run.last())]);
}

// Partition a CCW vertex-id loop into maximal collinear runs.
inline std::vector<PlanarEdge> planar_runs(const std::vector<Point2>& verts, const std::vector<int>& loop,
                                           double tol = kCollinearTol) {
    const int m = static_cast<int>(loop.size());
    auto at = [&](int k) { return verts[static_cast<std::size_t>(loop[static_cast<std::size_t>(((k % m) + m) % m)])]; };

    std::vector<int> corners; // positions where the direction turns
    for (int k = 0; k < m; ++k)
        if (!collinear(at(k - 1), at(k), at(k + 1), tol)) corners.push_back(k);
    if (corners.size() < 3) throw MeshError("planar_runs: loop has fewer than 3 corners");

    std::vector<PlanarEdge> runs;
    runs.reserve(corners.size());
    for (std::size_t r = 0; r < corners.size(); ++r) {
        const int from = corners[r];
        const int to = corners[(r + 1) % corners.size()];
        PlanarEdge run;
        for (int k = from;; k = (k + 1) % m) {
            run.chain.push_back(loop[static_cast<std::size_t>(k)]);
            if (k == to && run.chain.size() > 1) break;
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

// Partition a cell's boundary into maximal collinear runs, CCW order.
inline std::vector<PlanarEdge> planar_edges(const PolygonMesh& mesh, int cell_id,
                                            double tol = kCollinearTol) {
    return planar_runs(mesh.vertices, mesh.cells[static_cast<std::size_t>(cell_id)].v, tol);
}

} // namespace vemrec

#endif
