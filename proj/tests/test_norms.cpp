#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "vemrec/bench.hpp"
#include "vemrec/generators.hpp"
#include "vemrec/norms.hpp"

using namespace vemrec;

TEST_CASE("integrate_cell through the mesh path matches the analytic value") {
    const auto mesh = build_topology({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}},
                                     {{{0, 1, 2, 3, 4, 5}}});
    const double got = integrate_cell(mesh, 0, [](Point2 p) { return p.x * p.x * p.y * p.y; });
    CHECK(got == doctest::Approx(8.0 / 9.0 + 7.0 / 9.0).epsilon(1e-13));
    CHECK(integrate_cell(mesh, 0, [](Point2) { return 1.0; }) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("projected gradient error vanishes for linear exact solutions") {
    const auto mesh = generate(MeshFamily::T3, 4);
    const auto dofs = interpolate([](Point2 p) { return 1.0 + 2.0 * p.x - 3.0 * p.y; }, mesh);
    const double err = grad_error_projected(mesh, [](Point2) { return Point2{2.0, -3.0}; }, dofs);
    CHECK(err <= 1e-12);
}

TEST_CASE("piecewise-constant exact gradient equal to the discrete one gives zero") {
    const auto mesh = generate(MeshFamily::T6, 3, 4);
    const auto dofs = interpolate([](Point2 p) { return 0.7 * p.x + 0.1 * p.y; }, mesh);
    CHECK(grad_error_projected(mesh, [](Point2) { return Point2{0.7, 0.1}; }, dofs) <= 1e-12);
}

TEST_CASE("recovered error vanishes when the field matches a constant exact gradient") {
    const auto mesh = generate(MeshFamily::T2, 4);
    RecoveredField rec;
    rec.gx.values.assign(mesh.vertices.size(), 2.0);
    rec.gy.values.assign(mesh.vertices.size(), -1.0);
    CHECK(recovered_error(mesh, [](Point2) { return Point2{2.0, -1.0}; }, rec) <= 1e-12);
}

TEST_CASE("supercloseness norm: zero difference and constant-vector kernel") {
    const auto mesh = generate(MeshFamily::T5, 4);
    const auto tc = case1();
    const auto sys = assemble(mesh, tc.f, tc.g);
    const auto u = interpolate(tc.u, mesh);
    CHECK(supercloseness(sys.A, u, u) == 0.0);
    DofVector shifted = u;
    for (double& v : shifted.values) v += 5.0; // constants lie in the kernel of A_h
    CHECK(supercloseness(sys.A, shifted, u) <= 1e-6);
    CHECK(supercloseness(sys.A, shifted, u) * supercloseness(sys.A, shifted, u) <= 1e-12);
}

TEST_CASE("supercloseness equals the quadratic form computed densely") {
    const auto mesh = generate(MeshFamily::T1, 3);
    const auto tc = case1();
    const auto sys = assemble(mesh, tc.f, tc.g);
    std::mt19937_64 rng(37);
    DofVector a, b;
    a.values.resize(mesh.vertices.size());
    b.values.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        a.values[i] = uniform(rng, -1.0, 1.0);
        b.values[i] = uniform(rng, -1.0, 1.0);
    }
    std::vector<double> d(a.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
    const auto ad = sys.A.matvec(d);
    double quad = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) quad += d[i] * ad[i];
    CHECK(supercloseness(sys.A, a, b) == doctest::Approx(std::sqrt(quad)).epsilon(1e-12));
}

TEST_CASE("norm nonnegativity and triangle inequality spot checks") {
    const auto mesh = generate(MeshFamily::T4, 4, 6);
    const auto tc = case1();
    const auto sys = assemble(mesh, tc.f, tc.g);
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        DofVector u, v, w;
        u.values.resize(mesh.vertices.size());
        v.values.resize(mesh.vertices.size());
        w.values.resize(mesh.vertices.size());
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            u.values[i] = uniform(rng, -1.0, 1.0);
            v.values[i] = uniform(rng, -1.0, 1.0);
            w.values[i] = 0.0;
        }
        const double uv = supercloseness(sys.A, u, v);
        CHECK(uv >= 0.0);
        CHECK(uv <= supercloseness(sys.A, u, w) + supercloseness(sys.A, v, w) + 1e-12);
    }
}
