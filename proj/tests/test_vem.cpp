#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "vemrec/bench.hpp"
#include "vemrec/generators.hpp"
#include "vemrec/linalg.hpp"
#include "vemrec/solver.hpp"
#include "vemrec/vem.hpp"

using namespace vemrec;

namespace {

PolygonMesh unit_square_cell() {
    return build_topology({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2, 3}}});
}

PolygonMesh hexagon_cell() {
    std::vector<Point2> v;
    for (int k = 0; k < 6; ++k) {
        const double ang = M_PI / 3.0 * k;
        v.push_back({std::cos(ang), 1.05 * std::sin(ang)});
    }
    std::vector<int> loop{0, 1, 2, 3, 4, 5};
    return build_topology(v, {{loop}});
}

} // namespace

TEST_CASE("pi_nabla reproduces constants, x, and the (0,0,1,1) square example") {
    const auto sq = unit_square_cell();
    const auto el = build_local_element(sq, 0);

    const std::vector<double> c3{3, 3, 3, 3};
    const LinearPoly p3 = pi_nabla(el, c3);
    CHECK(p3.cx == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p3.cy == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p3.eval({0.3, 0.9}) == doctest::Approx(3.0).epsilon(1e-14));

    const std::vector<double> px{0, 1, 1, 0}; // samples of p = x
    const LinearPoly pp = pi_nabla(el, px);
    CHECK(pp.cx == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pp.cy == doctest::Approx(0.0).epsilon(1e-14));

    const std::vector<double> py{0, 0, 1, 1}; // samples of p = y
    const LinearPoly pq = pi_nabla(el, py);
    CHECK(pq.cx == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pq.cy == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pq.value_at_origin() == doctest::Approx(0.5).epsilon(1e-14)); // constant part 1/2
}

TEST_CASE("element geometry: outward normals, lengths, and the gradient identity") {
    const auto sq = unit_square_cell();
    const auto el = build_local_element(sq, 0);
    CHECK(el.edge_length[0] == doctest::Approx(1.0));
    CHECK(el.edge_normal[0].x == doctest::Approx(0.0));
    CHECK(el.edge_normal[0].y == doctest::Approx(-1.0)); // bottom edge points down
    CHECK(el.edge_normal[1].x == doctest::Approx(1.0));
    // g_j = (|e_{j-1}| n_{j-1} + |e_j| n_j) / (2|E|)
    for (int j = 0; j < 4; ++j) {
        const int jm = (j + 3) % 4;
        const Point2 want = (1.0 / (2.0 * el.area)) *
                            (el.edge_length[jm] * el.edge_normal[jm] + el.edge_length[j] * el.edge_normal[j]);
        CHECK(el.basis_gradient[j].x == doctest::Approx(want.x).epsilon(1e-14));
        CHECK(el.basis_gradient[j].y == doctest::Approx(want.y).epsilon(1e-14));
    }
}

TEST_CASE("projection consistency on random polygons") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto poly = testsupport::random_polygon(rng);
        if (!polygon_is_simple(poly) || polygon_signed_area(poly) <= 0.0) continue;
        std::vector<int> loop(poly.size());
        for (std::size_t k = 0; k < poly.size(); ++k) loop[k] = static_cast<int>(k);
        const auto mesh = build_topology(poly, {{loop}});
        const auto el = build_local_element(mesh, 0);
        const double a = uniform(rng, -2, 2), b = uniform(rng, -2, 2), c = uniform(rng, -2, 2);
        std::vector<double> dofs;
        for (const Point2& p : poly) dofs.push_back(a + b * p.x + c * p.y);
        const LinearPoly proj = pi_nabla(el, dofs);
        CHECK(proj.cx == doctest::Approx(b).epsilon(1e-12));
        CHECK(proj.cy == doctest::Approx(c).epsilon(1e-12));
        CHECK(proj.eval({0.0, 0.0}) == doctest::Approx(a).epsilon(1e-11));
    }
}

TEST_CASE("local stiffness: kernel, symmetry, and the unit-square consistency part") {
    const auto sq = unit_square_cell();
    const auto el = build_local_element(sq, 0);

    // symbolic consistency matrix |E| g_i . g_j with g = (+-1/2, +-1/2)
    const double Kc[4][4] = {{0.5, 0.0, -0.5, 0.0},
                             {0.0, 0.5, 0.0, -0.5},
                             {-0.5, 0.0, 0.5, 0.0},
                             {0.0, -0.5, 0.0, 0.5}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Point2 gi = el.basis_gradient[i];
            const Point2 gj = el.basis_gradient[j];
            CHECK(el.area * (gi.x * gj.x + gi.y * gj.y) == doctest::Approx(Kc[i][j]).epsilon(1e-13));
        }

    // K = Kc + (I - D P)^T (I - D P), rebuilt independently
    const DenseMatrix R = DenseMatrix::identity(4) - el.D * el.P;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double stab = 0.0;
            for (int k = 0; k < 4; ++k) stab += R(k, i) * R(k, j);
            CHECK(el.K(i, j) == doctest::Approx(Kc[i][j] + stab).epsilon(1e-13));
        }
}

TEST_CASE("stiffness row sums vanish and K is symmetric on generated meshes") {
    for (MeshFamily f : {MeshFamily::T1, MeshFamily::T2, MeshFamily::T3, MeshFamily::T4,
                         MeshFamily::T5, MeshFamily::T6, MeshFamily::LShape}) {
        const auto mesh = generate(f, 4, 2);
        for (int c = 0; c < mesh.cell_count(); ++c) {
            const auto el = build_local_element(mesh, c);
            const int n = el.size();
            double asym = 0.0;
            for (int i = 0; i < n; ++i) {
                double row = 0.0;
                for (int j = 0; j < n; ++j) {
                    row += el.K(i, j);
                    asym = std::max(asym, std::abs(el.K(i, j) - el.K(j, i)));
                }
                CHECK(std::abs(row) <= 1e-12);
            }
            CHECK(asym <= 1e-13);
        }
    }
}

TEST_CASE("hexagon stiffness is PSD with a one-dimensional kernel") {
    const auto hex = hexagon_cell();
    const auto K = local_stiffness(hex, 0);
    const auto ev = symmetric_eigenvalues(K);
    CHECK(ev.front() >= -1e-12);
    int zeros = 0;
    for (double lambda : ev)
        if (std::abs(lambda) < 1e-10) ++zeros;
    CHECK(zeros == 1);
}

TEST_CASE("assemble with zero data yields the zero solution") {
    const auto mesh = generate(MeshFamily::T2, 4);
    const auto sys = assemble(mesh, [](Point2) { return 0.0; }, [](Point2) { return 0.0; });
    for (double v : sys.b) CHECK(v == 0.0);
    auto [A, b] = reduce_dirichlet(sys);
    const auto sol = cg_solve(A, b);
    for (double x : sol.x) CHECK(std::abs(x) <= 1e-14);
}

TEST_CASE("patch test: harmonic linears are reproduced at the vertices") {
    auto ell = [](Point2 p) { return 0.25 - 0.8 * p.x + 1.7 * p.y; };
    for (MeshFamily f : {MeshFamily::T1, MeshFamily::T2, MeshFamily::T3, MeshFamily::T4,
                         MeshFamily::T5, MeshFamily::T6, MeshFamily::LShape}) {
        const auto mesh = generate(f, 4, 5);
        const auto sys = assemble(mesh, [](Point2) { return 0.0; }, ell);
        auto [A, b] = reduce_dirichlet(sys);
        SolverConfig cfg;
        cfg.rel_tol = 1e-14;
        const auto sol = cg_solve(A, b, cfg);
        double worst = 0.0;
        for (int v = 0; v < mesh.vertex_count(); ++v)
            worst = std::max(worst, std::abs(sol.x[v] - ell(mesh.vertices[v])));
        CAPTURE(family_name(f));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("load vector against an independent hand-built oracle on t1(4)") {
    // On a square cell of side s with vertices CCW from (x0,y0), the projected
    // basis of corner j is 1/4 + gj . (p - centroid), gj in {(-1,-1),(1,-1),(1,1),(-1,1)}/(2s).
    const auto tc = case1();
    const auto mesh = generate(MeshFamily::T1, 4);
    const int center = 12; // vertex (0.5, 0.5) of the 5x5 lattice
    REQUIRE(mesh.vertices[center].x == doctest::Approx(0.5));
    REQUIRE(mesh.vertices[center].y == doctest::Approx(0.5));

    const double s = 0.25;
    double oracle = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& cv = mesh.cells[c].v;
        const auto it = std::find(cv.begin(), cv.end(), center);
        if (it == cv.end()) continue;
        const int local = static_cast<int>(it - cv.begin());
        static const double gsign[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
        const auto [area, xc] = cell_area_centroid(mesh, c);
        const Point2 origin = mesh.vertices[cv[0]];
        double cell_int = 0.0;
        for (int qi = 0; qi < 16; ++qi)
            for (int qj = 0; qj < 16; ++qj) {
                const Point2 p{origin.x + s * testsupport::gauss16_x[qi],
                               origin.y + s * testsupport::gauss16_x[qj]};
                const double phi = 0.25 + (gsign[local][0] * (p.x - xc.x) + gsign[local][1] * (p.y - xc.y)) / (2.0 * s);
                cell_int += testsupport::gauss16_w[qi] * testsupport::gauss16_w[qj] * tc.f(p) * phi;
            }
        oracle += cell_int * s * s;
    }

    // matching quadrature degree: agreement at solver precision
    const auto sys10 = assemble(mesh, tc.f, tc.g, 10);
    CHECK(std::abs(sys10.b[center] - oracle) <= 1e-10 * std::abs(oracle));
    // the default degree-4 load carries only its own quadrature truncation
    const auto sys4 = assemble(mesh, tc.f, tc.g, 4);
    CHECK(std::abs(sys4.b[center] - oracle) <= 1e-5);
    const auto fine = generate(MeshFamily::T1, 8);
    const auto f4 = assemble(fine, tc.f, tc.g, 4);
    const auto f10 = assemble(fine, tc.f, tc.g, 10);
    double worst = 0.0;
    for (int v = 0; v < fine.vertex_count(); ++v)
        worst = std::max(worst, std::abs(f4.b[v] - f10.b[v]));
    CHECK(worst <= 5e-8); // sixth-order decay of the degree-4 rule
}

TEST_CASE("interpolate evaluates at the vertices") {
    const auto mesh = generate(MeshFamily::T1, 2);
    const auto ones = interpolate([](Point2) { return 1.0; }, mesh);
    for (int v = 0; v < mesh.vertex_count(); ++v) CHECK(ones[v] == 1.0);
    const auto xs = interpolate([](Point2 p) { return p.x; }, mesh);
    for (int v = 0; v < mesh.vertex_count(); ++v) CHECK(xs[v] == mesh.vertices[v].x);
    const auto sins = interpolate([](Point2 p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); }, mesh);
    CHECK(sins[4] == doctest::Approx(1.0).epsilon(1e-15)); // vertex (0.5, 0.5)
}

TEST_CASE("reduced system is positive definite") {
    const auto mesh = generate(MeshFamily::T6, 4, 9);
    const auto tc = case1();
    const auto sys = assemble(mesh, tc.f, tc.g);
    CHECK(sys.A.max_asymmetry() <= 1e-13);
    auto [A, b] = reduce_dirichlet(sys);
    const auto sol = cg_solve(A, b);
    CHECK(sol.converged);
    std::mt19937_64 rng(17);
    std::vector<double> x(A.n), ax(A.n);
    for (int trial = 0; trial < 100; ++trial) {
        double norm2 = 0.0;
        for (int i = 0; i < A.n; ++i) {
            x[i] = uniform(rng, -1.0, 1.0);
            norm2 += x[i] * x[i];
        }
        A.matvec(x, ax);
        double quad = 0.0;
        for (int i = 0; i < A.n; ++i) quad += x[i] * ax[i];
        CHECK(quad > 0.0);
        CHECK(quad > 1e-12 * norm2);
    }
}

TEST_CASE("matrix market export round trip sanity") {
    const auto mesh = generate(MeshFamily::T1, 2);
    const auto sys = assemble(mesh, [](Point2) { return 1.0; }, [](Point2) { return 0.0; });
    std::ostringstream os;
    write_matrix_market(sys.A, os);
    const std::string text = os.str();
    CHECK(text.find("%%MatrixMarket") == 0);
    CHECK(text.find("9 9 ") != std::string::npos); // 9 vertices
}
