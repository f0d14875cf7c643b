/// \file recovery.hpp
/// \brief Polynomial-preserving gradient recovery on polygonal meshes:
///        layered vertex patches grown to a rank-safe sample set, a scaled
///        least-squares quadratic fit, and the per-vertex recovered gradient
///        G_h u_h(z_i) = (a2_hat, a3_hat) / h_i.
#ifndef VEMREC_RECOVERY_HPP
#define VEMREC_RECOVERY_HPP

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "vemrec/linalg.hpp"
#include "vemrec/norms.hpp"
#include "vemrec/vem.hpp"

namespace vemrec {

// Condition threshold standing in for "unique least-squares fit".
inline constexpr double kPatchConditionLimit = 1e8;
inline constexpr int kMinPatchSamples = 6;

struct VertexPatch {
    int vertex_id = -1;
    int layers = 0;            // n_i
    std::vector<int> cells;    // Omega_{z_i}, ascending
    std::vector<int> samples;  // B_{z_i} vertex ids, ascending, de-duplicated
    double h_scale = 0.0;      // h_i = max pairwise sample distance
};

namespace detail {

// First n layers of elements around a vertex: layer 1 touches the vertex,
// layer k >= 2 shares an edge with the previous layers.
inline std::set<int> layered_cells(const PolygonMesh& mesh, int vertex_id, int layers) {
    std::set<int> cells(mesh.vertex_cells[static_cast<std::size_t>(vertex_id)].begin(),
                        mesh.vertex_cells[static_cast<std::size_t>(vertex_id)].end());
    std::vector<int> frontier(cells.begin(), cells.end());
    for (int layer = 2; layer <= layers; ++layer) {
        std::vector<int> next;
        for (int c : frontier)
            for (int nb : mesh.cell_edge_neighbor[static_cast<std::size_t>(c)])
                if (nb >= 0 && cells.insert(nb).second) next.push_back(nb);
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return cells;
}

inline VertexPatch patch_candidate(const PolygonMesh& mesh, int vertex_id, int layers) {
    VertexPatch p;
    p.vertex_id = vertex_id;
    p.layers = layers;
    const auto cells = layered_cells(mesh, vertex_id, layers);
    p.cells.assign(cells.begin(), cells.end());
    std::set<int> sample_set;
    for (int c : p.cells)
        for (int vid : mesh.cells[static_cast<std::size_t>(c)].v) sample_set.insert(vid);
    p.samples.assign(sample_set.begin(), sample_set.end());
    p.h_scale = 0.0;
    for (std::size_t i = 0; i < p.samples.size(); ++i)
        for (std::size_t j = i + 1; j < p.samples.size(); ++j)
            p.h_scale = std::max(p.h_scale, dist(mesh.vertices[static_cast<std::size_t>(p.samples[i])],
                                                 mesh.vertices[static_cast<std::size_t>(p.samples[j])]));
    return p;
}

} // namespace detail

// Scaled Vandermonde on the reference patch: row (1, xi, eta, xi^2, xi eta,
// eta^2) with (xi, eta) = (z - z_i) / h_i.
inline DenseMatrix scaled_vandermonde(const PolygonMesh& mesh, const VertexPatch& patch) {
    const Point2 z0 = mesh.vertices[static_cast<std::size_t>(patch.vertex_id)];
    DenseMatrix A(static_cast<int>(patch.samples.size()), 6);
    for (std::size_t r = 0; r < patch.samples.size(); ++r) {
        const Point2 z = mesh.vertices[static_cast<std::size_t>(patch.samples[r])];
        const double xi = (z.x - z0.x) / patch.h_scale;
        const double eta = (z.y - z0.y) / patch.h_scale;
        const int i = static_cast<int>(r);
        A(i, 0) = 1.0;
        A(i, 1) = xi;
        A(i, 2) = eta;
        A(i, 3) = xi * xi;
        A(i, 4) = xi * eta;
        A(i, 5) = eta * eta;
    }
    return A;
}

// Rank condition: enough samples and a safely conditioned scaled Vandermonde.
inline bool satisfies_rank(const PolygonMesh& mesh, const VertexPatch& patch) {
    if (static_cast<int>(patch.samples.size()) < kMinPatchSamples) return false;
    if (!(patch.h_scale > 0.0)) return false;
    return condition_estimate(scaled_vandermonde(mesh, patch)) <= kPatchConditionLimit;
}

// Layered patch construction: start with one layer at interior vertices and
// two at boundary vertices, grow until the rank condition holds.
inline VertexPatch build_patch(const PolygonMesh& mesh, int vertex_id) {
    int layers = mesh.boundary_vertex[static_cast<std::size_t>(vertex_id)] ? 2 : 1;
    for (;; ++layers) {
        VertexPatch p = detail::patch_candidate(mesh, vertex_id, layers);
        if (satisfies_rank(mesh, p)) return p;
        if (static_cast<int>(p.cells.size()) == mesh.cell_count())
            throw RecoveryError("build_patch: rank condition unreachable at vertex " +
                                std::to_string(vertex_id) + " (mesh too coarse)");
    }
}

// Quadratic fitted at the patch origin in scaled coordinates:
//   p_hat(xi, eta) = a1 + a2 xi + a3 eta + a4 xi^2 + a5 xi eta + a6 eta^2.
struct FittedQuadratic {
    std::array<double, 6> a_hat{};
    Point2 origin;
    double h_scale = 0.0;

    double eval(Point2 z) const {
        const double xi = (z.x - origin.x) / h_scale;
        const double eta = (z.y - origin.y) / h_scale;
        return a_hat[0] + a_hat[1] * xi + a_hat[2] * eta + a_hat[3] * xi * xi +
               a_hat[4] * xi * eta + a_hat[5] * eta * eta;
    }
};

inline FittedQuadratic fit_quadratic(const PolygonMesh& mesh, const VertexPatch& patch,
                                     const DofVector& dofs) {
    DenseMatrix A = scaled_vandermonde(mesh, patch);
    std::vector<double> b;
    b.reserve(patch.samples.size());
    for (int vid : patch.samples) b.push_back(dofs[vid]);
    std::vector<double> x;
    try {
        x = solve_least_squares(std::move(A), std::move(b));
    } catch (const Error&) {
        throw RecoveryError("fit_quadratic: numerically rank-deficient patch at vertex " +
                            std::to_string(patch.vertex_id) + " (condition " +
                            std::to_string(condition_estimate(scaled_vandermonde(mesh, patch))) + ")");
    }
    FittedQuadratic fit;
    std::copy(x.begin(), x.end(), fit.a_hat.begin());
    fit.origin = mesh.vertices[static_cast<std::size_t>(patch.vertex_id)];
    fit.h_scale = patch.h_scale;
    return fit;
}

// G_h u_h(z_i) = grad p_i(z_i) = (a2_hat, a3_hat) / h_i.
inline Point2 recover_vertex(const FittedQuadratic& fit) {
    return {fit.a_hat[1] / fit.h_scale, fit.a_hat[2] / fit.h_scale};
}

// Per-vertex recovery over the whole mesh; the global field is the vertex
// interpolant of the recovered values, component-wise.
inline RecoveredField recover_field(const PolygonMesh& mesh, const DofVector& dofs) {
    require(dofs.size() == mesh.vertex_count(), "recover_field: dof count mismatch");
    RecoveredField field;
    field.gx.values.resize(mesh.vertices.size());
    field.gy.values.resize(mesh.vertices.size());
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const VertexPatch patch = build_patch(mesh, v);
        const Point2 g = recover_vertex(fit_quadratic(mesh, patch, dofs));
        field.gx[v] = g.x;
        field.gy[v] = g.y;
    }
    return field;
}

} // namespace vemrec

#endif
