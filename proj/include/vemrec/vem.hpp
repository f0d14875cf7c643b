/// \file vem.hpp
/// \brief Lowest-order virtual element method: element projections onto
///        linears, dofi-dofi stabilized local stiffness, global assembly and
///        vertex interpolation. Degrees of freedom are vertex values.
#ifndef VEMREC_VEM_HPP
#define VEMREC_VEM_HPP

#include <functional>
#include <tuple>
#include <vector>

#include "vemrec/csr.hpp"
#include "vemrec/linalg.hpp"
#include "vemrec/mesh.hpp"
#include "vemrec/quadrature.hpp"

namespace vemrec {

using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Point2(Point2)>;

// Linear polynomial centered at an element point:
//   p(x, y) = c0 + cx (x - origin.x) + cy (y - origin.y).
struct LinearPoly {
    Point2 origin;
    double c0 = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    double eval(Point2 p) const { return c0 + cx * (p.x - origin.x) + cy * (p.y - origin.y); }
    Point2 gradient() const { return {cx, cy}; }
    double value_at_origin() const { return c0; }
};

struct DofVector {
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
};

// Element-local data: the projection map P (coefficients of Pi-nabla of each
// local basis function in the centered monomial basis {1, x-xc, y-yc}), the
// dof evaluation matrix D, and the stabilized stiffness K.
struct LocalElement {
    int cell_id = -1;
    std::vector<int> vertex_ids;
    double area = 0.0;
    Point2 centroid;
    std::vector<double> edge_length;    // edge j: vertex j -> j+1
    std::vector<Point2> edge_normal;    // outward unit normals
    std::vector<Point2> basis_gradient; // per local basis function, gradient of its projection
    double mean_dx = 0.0;               // vertex averages of (x - xc), (y - yc)
    double mean_dy = 0.0;
    DenseMatrix P; // 3 x N
    DenseMatrix D; // N x 3
    DenseMatrix K; // N x N, K = |E| G^T G + (I - D P)^T (I - D P)

    int size() const { return static_cast<int>(vertex_ids.size()); }
};

// Gradient of the Pi-nabla projection of local basis function j,
//   g_j = (y_{j+1} - y_{j-1}, x_{j-1} - x_{j+1}) / (2 |E|),
// which is the boundary integral (1/|E|) sum_e (phi_j average) |e| n_e.
inline LocalElement build_local_element(const PolygonMesh& mesh, int cell_id) {
    LocalElement el;
    el.cell_id = cell_id;
    el.vertex_ids = mesh.cells[static_cast<std::size_t>(cell_id)].v;
    const auto [area, centroid] = cell_area_centroid(mesh, cell_id);
    el.area = area;
    el.centroid = centroid;

    const int n = el.size();
    const auto pts = mesh.cell_points(cell_id);
    el.edge_length.resize(static_cast<std::size_t>(n));
    el.edge_normal.resize(static_cast<std::size_t>(n));
    el.basis_gradient.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Point2 a = pts[static_cast<std::size_t>(j)];
        const Point2 b = pts[static_cast<std::size_t>((j + 1) % n)];
        const double len = dist(a, b);
        el.edge_length[static_cast<std::size_t>(j)] = len;
        el.edge_normal[static_cast<std::size_t>(j)] = {(b.y - a.y) / len, (a.x - b.x) / len};
        const Point2 prev = pts[static_cast<std::size_t>((j + n - 1) % n)];
        const Point2 next = pts[static_cast<std::size_t>((j + 1) % n)];
        el.basis_gradient[static_cast<std::size_t>(j)] = {(next.y - prev.y) / (2.0 * area),
                                                          (prev.x - next.x) / (2.0 * area)};
    }
    for (const Point2& p : pts) {
        el.mean_dx += (p.x - centroid.x) / n;
        el.mean_dy += (p.y - centroid.y) / n;
    }

    el.P = DenseMatrix(3, n);
    el.D = DenseMatrix(n, 3);
    for (int j = 0; j < n; ++j) {
        const Point2 g = el.basis_gradient[static_cast<std::size_t>(j)];
        // constant part matches the vertex average of the projected function
        el.P(0, j) = 1.0 / n - g.x * el.mean_dx - g.y * el.mean_dy;
        el.P(1, j) = g.x;
        el.P(2, j) = g.y;
        el.D(j, 0) = 1.0;
        el.D(j, 1) = pts[static_cast<std::size_t>(j)].x - centroid.x;
        el.D(j, 2) = pts[static_cast<std::size_t>(j)].y - centroid.y;
    }

    el.K = DenseMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Point2 gi = el.basis_gradient[static_cast<std::size_t>(i)];
            const Point2 gj = el.basis_gradient[static_cast<std::size_t>(j)];
            el.K(i, j) = area * (gi.x * gj.x + gi.y * gj.y);
        }
    const DenseMatrix R = DenseMatrix::identity(n) - el.D * el.P; // (I - D P)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += R(k, i) * R(k, j);
            el.K(i, j) += s;
        }
    return el;
}

// Pi-nabla (= Pi-0 at lowest order) of the virtual function with the given
// vertex dofs: gradient from the boundary integral, constant by matching
// vertex averages.
inline LinearPoly pi_nabla(const LocalElement& el, std::span<const double> local_dofs) {
    require(static_cast<int>(local_dofs.size()) == el.size(), "pi_nabla: dof count mismatch");
    LinearPoly p;
    p.origin = el.centroid;
    double mean = 0.0;
    for (int j = 0; j < el.size(); ++j) {
        const Point2 g = el.basis_gradient[static_cast<std::size_t>(j)];
        p.cx += g.x * local_dofs[static_cast<std::size_t>(j)];
        p.cy += g.y * local_dofs[static_cast<std::size_t>(j)];
        mean += local_dofs[static_cast<std::size_t>(j)] / el.size();
    }
    p.c0 = mean - p.cx * el.mean_dx - p.cy * el.mean_dy;
    return p;
}

inline LinearPoly pi_nabla_on_cell(const PolygonMesh& mesh, int cell_id, const DofVector& dofs) {
    const LocalElement el = build_local_element(mesh, cell_id);
    std::vector<double> local;
    local.reserve(el.vertex_ids.size());
    for (int vid : el.vertex_ids) local.push_back(dofs[vid]);
    return pi_nabla(el, local);
}

inline DenseMatrix local_stiffness(const PolygonMesh& mesh, int cell_id) {
    return build_local_element(mesh, cell_id).K;
}

struct DirichletMap {
    std::vector<int> index;    // ascending constrained vertex ids
    std::vector<double> value; // boundary values
};

struct SparseSystem {
    CsrMatrix A;           // full stabilized stiffness on all dofs
    std::vector<double> b; // load, no boundary terms applied
    DirichletMap dirichlet;
};

// Global assembly: scatter local K, load b_i = sum_E int_E f Pi0(phi_i),
// and record Dirichlet vertex values from g.
inline SparseSystem assemble(const PolygonMesh& mesh, const ScalarField& f, const ScalarField& g,
                             int load_quad_degree = kDefaultQuadDegree) {
    SparseSystem sys;
    const int nv = mesh.vertex_count();
    sys.b.assign(static_cast<std::size_t>(nv), 0.0);
    std::vector<std::tuple<int, int, double>> trip;
    trip.reserve(static_cast<std::size_t>(mesh.cell_count()) * 24);

    for (int c = 0; c < mesh.cell_count(); ++c) {
        const LocalElement el = build_local_element(mesh, c);
        const int n = el.size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                trip.emplace_back(el.vertex_ids[static_cast<std::size_t>(i)],
                                  el.vertex_ids[static_cast<std::size_t>(j)], el.K(i, j));

        // b_j^E = s_j int f + gx_j int f (x-xc) + gy_j int f (y-yc)
        const auto pts = mesh.cell_points(c);
        const Point2 xc = el.centroid;
        const double f0 = integrate_polygon(pts, f, load_quad_degree);
        const double fx = integrate_polygon(pts, [&](Point2 p) { return f(p) * (p.x - xc.x); }, load_quad_degree);
        const double fy = integrate_polygon(pts, [&](Point2 p) { return f(p) * (p.y - xc.y); }, load_quad_degree);
        for (int j = 0; j < n; ++j) {
            const Point2 gj = el.basis_gradient[static_cast<std::size_t>(j)];
            sys.b[static_cast<std::size_t>(el.vertex_ids[static_cast<std::size_t>(j)])] +=
                el.P(0, j) * f0 + gj.x * fx + gj.y * fy;
        }
    }
    sys.A = CsrMatrix::from_triplets(nv, std::move(trip));

    for (int v = 0; v < nv; ++v)
        if (mesh.boundary_vertex[static_cast<std::size_t>(v)]) {
            sys.dirichlet.index.push_back(v);
            sys.dirichlet.value.push_back(g(mesh.vertices[static_cast<std::size_t>(v)]));
        }
    return sys;
}

// Symmetric Dirichlet elimination: constrained rows/columns become identity,
// boundary values move to the right-hand side. Keeps the SPD structure.
inline std::pair<CsrMatrix, std::vector<double>> reduce_dirichlet(const SparseSystem& sys) {
    const int n = sys.A.n;
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < sys.dirichlet.index.size(); ++k) {
        fixed[static_cast<std::size_t>(sys.dirichlet.index[k])] = 1;
        bc[static_cast<std::size_t>(sys.dirichlet.index[k])] = sys.dirichlet.value[k];
    }
    CsrMatrix A = sys.A;
    std::vector<double> b = sys.b;
    for (int i = 0; i < n; ++i) {
        for (int k = A.row_ptr[static_cast<std::size_t>(i)]; k < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            const int j = A.col[static_cast<std::size_t>(k)];
            double& v = A.val[static_cast<std::size_t>(k)];
            if (fixed[static_cast<std::size_t>(i)]) {
                v = (j == i) ? 1.0 : 0.0;
            } else if (fixed[static_cast<std::size_t>(j)]) {
                b[static_cast<std::size_t>(i)] -= v * bc[static_cast<std::size_t>(j)];
                v = 0.0;
            }
        }
    }
    for (int i = 0; i < n; ++i)
        if (fixed[static_cast<std::size_t>(i)]) b[static_cast<std::size_t>(i)] = bc[static_cast<std::size_t>(i)];
    return {std::move(A), std::move(b)};
}

// Vertex interpolant into the virtual space: values[i] = u(z_i).
inline DofVector interpolate(const ScalarField& u, const PolygonMesh& mesh) {
    DofVector d;
    d.values.reserve(mesh.vertices.size());
    for (const Point2& p : mesh.vertices) d.values.push_back(u(p));
    return d;
}

} // namespace vemrec

#endif
