// Shared test oracles, independent of the library code paths they check.
#ifndef VEMREC_TESTS_SUPPORT_HPP
#define VEMREC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "vemrec/csr.hpp"
#include "vemrec/mesh.hpp"

namespace testsupport {

using vemrec::Point2;

// Exact integral of x^a y^b over a polygon via the divergence theorem:
//   int_P x^a y^b dA = sum_edges int_0^1 x(t)^(a+1)/(a+1) y(t)^b (y_q - y_p) dt,
// with the 1-D edge integrals done by Gauss-Legendre of ample order.
// 16-point Gauss-Legendre on [0,1]: exact through degree 31.
inline constexpr double gauss16_x[16] = {
    0.005299532504175031, 0.0277124884633837,  0.06718439880608412, 0.1222977958224985,
    0.1910618777986781,   0.2709916111713863,  0.3591982246103705,  0.4524937450811813,
    0.5475062549188187,   0.6408017753896295,  0.7290083888286137,  0.8089381222013219,
    0.8777022041775015,   0.9328156011939159,  0.9722875115366163,  0.994700467495825};
inline constexpr double gauss16_w[16] = {
    0.01357622970587705, 0.03112676196932395, 0.04757925584124639, 0.06231448562776694,
    0.07479799440828837, 0.08457825969750127, 0.09130170752246179, 0.0947253052275343,
    0.0947253052275343,  0.09130170752246179, 0.08457825969750127, 0.07479799440828837,
    0.06231448562776694, 0.04757925584124639, 0.03112676196932395, 0.01357622970587705};

inline double monomial_integral_divergence(std::span<const Point2> poly, int a, int b) {
    const double* gx = gauss16_x;
    const double* gw = gauss16_w;
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t e = 0; e < n; ++e) {
        const Point2 p = poly[e];
        const Point2 q = poly[(e + 1) % n];
        double edge = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double x = p.x + gx[k] * (q.x - p.x);
            const double y = p.y + gx[k] * (q.y - p.y);
            edge += gw[k] * std::pow(x, a + 1) * std::pow(y, b);
        }
        total += edge * (q.y - p.y) / (a + 1);
    }
    return total;
}

// Dense LDL^T factorization and solve for symmetric matrices (CG oracle).
inline std::vector<double> dense_ldlt_solve(const vemrec::CsrMatrix& A, std::span<const double> b) {
    const int n = A.n;
    std::vector<double> M(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            M[static_cast<std::size_t>(i) * n + A.col[k]] = A.val[k];
    std::vector<double> d(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double dj = M[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) dj -= M[static_cast<std::size_t>(j) * n + k] * M[static_cast<std::size_t>(j) * n + k] * d[k];
        d[j] = dj;
        for (int i = j + 1; i < n; ++i) {
            double lij = M[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                lij -= M[static_cast<std::size_t>(i) * n + k] * M[static_cast<std::size_t>(j) * n + k] * d[k];
            M[static_cast<std::size_t>(i) * n + j] = lij / dj;
        }
    }
    std::vector<double> x(b.begin(), b.end());
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < i; ++k) x[i] -= M[static_cast<std::size_t>(i) * n + k] * x[k];
    for (int i = 0; i < n; ++i) x[i] /= d[i];
    for (int i = n - 1; i >= 0; --i)
        for (int k = i + 1; k < n; ++k) x[i] -= M[static_cast<std::size_t>(k) * n + i] * x[k];
    return x;
}

// Canonical mesh comparison: vertices matched lexicographically within tol,
// cells compared as rotation-normalized id loops.
inline bool meshes_equivalent(const vemrec::PolygonMesh& a, const vemrec::PolygonMesh& b, double tol) {
    if (a.vertex_count() != b.vertex_count() || a.cell_count() != b.cell_count()) return false;
    auto order = [tol](const vemrec::PolygonMesh& m) {
        std::vector<int> idx(m.vertices.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int i, int j) {
            const Point2 p = m.vertices[i], q = m.vertices[j];
            if (std::abs(p.x - q.x) > tol) return p.x < q.x;
            return p.y < q.y;
        });
        return idx;
    };
    const auto ia = order(a);
    const auto ib = order(b);
    std::vector<int> a_to_canon(ia.size()), b_to_canon(ib.size());
    for (std::size_t k = 0; k < ia.size(); ++k) {
        if (vemrec::dist(a.vertices[ia[k]], b.vertices[ib[k]]) > tol) return false;
        a_to_canon[ia[k]] = static_cast<int>(k);
        b_to_canon[ib[k]] = static_cast<int>(k);
    }
    auto canon_cells = [](const vemrec::PolygonMesh& m, const std::vector<int>& to_canon) {
        std::vector<std::vector<int>> cells;
        for (const auto& c : m.cells) {
            std::vector<int> loop;
            for (int v : c.v) loop.push_back(to_canon[v]);
            const auto min_it = std::min_element(loop.begin(), loop.end());
            std::rotate(loop.begin(), min_it, loop.end());
            cells.push_back(std::move(loop));
        }
        std::sort(cells.begin(), cells.end());
        return cells;
    };
    return canon_cells(a, a_to_canon) == canon_cells(b, b_to_canon);
}

// Random star-shaped simple polygon around a random center.
inline std::vector<Point2> random_polygon(std::mt19937_64& rng, int min_sides = 4, int max_sides = 9) {
    const int sides = min_sides + static_cast<int>(rng() % static_cast<std::uint64_t>(max_sides - min_sides + 1));
    const double cx = vemrec::uniform(rng, -1.0, 1.0);
    const double cy = vemrec::uniform(rng, -1.0, 1.0);
    std::vector<double> angles;
    for (int k = 0; k < sides; ++k) angles.push_back(vemrec::uniform(rng, 0.0, 2.0 * M_PI));
    std::sort(angles.begin(), angles.end());
    for (int k = 1; k < sides; ++k)
        if (angles[k] - angles[k - 1] < 1e-2) angles[k] = angles[k - 1] + 1e-2;
    std::vector<Point2> poly;
    for (double ang : angles) {
        const double r = vemrec::uniform(rng, 0.35, 1.0);
        poly.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
    }
    return poly;
}

} // namespace testsupport

#endif
