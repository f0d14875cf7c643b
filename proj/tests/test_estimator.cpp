#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "vemrec/bench.hpp"
#include "vemrec/estimator.hpp"
#include "vemrec/generators.hpp"

using namespace vemrec;

namespace {

// Exhaustive minimal-cardinality search over all subsets meeting the bulk
// criterion; only usable for short indicator vectors.
int exhaustive_min_cardinality(const std::vector<double>& eta, double theta) {
    const int n = static_cast<int>(eta.size());
    double total2 = 0.0;
    for (double e : eta) total2 += e * e;
    if (total2 <= 0.0) return 0;
    int best = n + 1;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double sum2 = 0.0;
        int card = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                sum2 += eta[i] * eta[i];
                ++card;
            }
        if (sum2 >= theta * theta * total2) best = std::min(best, card);
    }
    return best;
}

} // namespace

TEST_CASE("doerfler examples: prefix selection, theta = 1, equal indicators") {
    const std::vector<double> eta{0.8, 0.6, 0.0};
    const auto marked = dorfler_mark(eta, 0.8);
    CHECK(marked == std::vector<int>{0}); // 0.8 >= 0.8 * 1.0
    CHECK(exhaustive_min_cardinality(eta, 0.8) == 1);

    const auto all = dorfler_mark(eta, 1.0);
    CHECK(all == std::vector<int>{0, 1}); // every positive cell, zero excluded

    const std::vector<double> equal{0.3, 0.3, 0.3, 0.3};
    CHECK(dorfler_mark(equal, 0.5).size() == 1); // sqrt(c^2) >= 0.5 sqrt(4 c^2)
    CHECK(exhaustive_min_cardinality(equal, 0.5) == 1);
}

TEST_CASE("all-zero indicators mark nothing") {
    CHECK(dorfler_mark(std::vector<double>{0.0, 0.0}, 0.7).empty());
}

TEST_CASE("invalid theta is rejected") {
    CHECK_THROWS_AS(dorfler_mark(std::vector<double>{1.0}, 0.0), Error);
    CHECK_THROWS_AS(dorfler_mark(std::vector<double>{1.0}, 1.5), Error);
}

TEST_CASE("marked sets achieve the exhaustive minimum on random instances") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 13);
        std::vector<double> eta(n);
        for (double& e : eta) e = (rng() % 5 == 0) ? 0.0 : uniform(rng, 0.0, 1.0);
        const double theta = uniform(rng, 0.05, 1.0);
        const auto marked = dorfler_mark(eta, theta);
        double sum2 = 0.0, total2 = 0.0;
        for (int c : marked) sum2 += eta[c] * eta[c];
        for (double e : eta) total2 += e * e;
        if (total2 > 0.0) CHECK(sum2 >= theta * theta * total2 * (1.0 - 1e-12));
        CHECK(static_cast<int>(marked.size()) == exhaustive_min_cardinality(eta, theta));
    }
}

TEST_CASE("marking is monotone in theta") {
    std::mt19937_64 rng(59);
    std::vector<double> eta(20);
    for (double& e : eta) e = uniform(rng, 0.0, 1.0);
    const auto small = dorfler_mark(eta, 0.3);
    const auto large = dorfler_mark(eta, 0.8);
    for (int c : small) CHECK(std::find(large.begin(), large.end(), c) != large.end());
}

TEST_CASE("eta_global is invariant under cell reordering") {
    std::mt19937_64 rng(61);
    std::vector<double> eta(50);
    for (double& e : eta) e = uniform(rng, 0.0, 2.0);
    double fwd = 0.0, rev = 0.0;
    for (double e : eta) fwd += e * e;
    for (auto it = eta.rbegin(); it != eta.rend(); ++it) rev += (*it) * (*it);
    CHECK(std::sqrt(fwd) == doctest::Approx(std::sqrt(rev)).epsilon(1e-13));
}

TEST_CASE("local indicator vanishes when the recovered field equals the projected gradient") {
    const auto mesh = generate(MeshFamily::T2, 4);
    const auto dofs = interpolate([](Point2 p) { return 0.5 + 2.0 * p.x - 1.0 * p.y; }, mesh);
    RecoveredField rec;
    rec.gx.values.assign(mesh.vertices.size(), 2.0);
    rec.gy.values.assign(mesh.vertices.size(), -1.0);
    for (int c = 0; c < mesh.cell_count(); ++c)
        CHECK(local_indicator(mesh, c, dofs, rec) <= 1e-13);
}

TEST_CASE("constant mismatch integrates to sqrt(area) times the distance") {
    const auto mesh = generate(MeshFamily::T3, 3);
    const auto dofs = interpolate([](Point2 p) { return 1.0 * p.x + 2.0 * p.y; }, mesh);
    RecoveredField rec;
    rec.gx.values.assign(mesh.vertices.size(), 4.0); // c = (4, 0), g = (1, 2)
    rec.gy.values.assign(mesh.vertices.size(), 0.0);
    const double d = std::hypot(4.0 - 1.0, 0.0 - 2.0);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const double area = polygon_signed_area(mesh.cell_points(c));
        CHECK(local_indicator(mesh, c, dofs, rec) ==
              doctest::Approx(std::sqrt(area) * d).epsilon(1e-12));
    }
}

TEST_CASE("degree-4 and degree-10 quadrature agree on the polynomial indicator integrand") {
    const auto mesh = generate(MeshFamily::T1, 8);
    const auto tc = case1();
    const auto sol = solve_case(mesh, tc);
    const auto rec = recover_field(mesh, sol.u);
    double sum4 = 0.0, sum10 = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const double e4 = local_indicator(mesh, c, sol.u, rec, 4);
        const double e10 = local_indicator(mesh, c, sol.u, rec, 10);
        sum4 += e4 * e4;
        sum10 += e10 * e10;
    }
    CHECK(sum4 == doctest::Approx(sum10).epsilon(1e-12));
}

TEST_CASE("effectivity rejects an exactly representable solution") {
    const auto mesh = generate(MeshFamily::T1, 4);
    auto ell = [](Point2 p) { return 1.0 + p.x - 2.0 * p.y; };
    const auto sys = assemble(mesh, [](Point2) { return 0.0; }, ell);
    auto [A, b] = reduce_dirichlet(sys);
    DofVector u;
    u.values = cg_solve(A, b).x;
    const auto rec = recover_field(mesh, u);
    CHECK_THROWS_AS(effectivity(mesh, [](Point2) { return Point2{1.0, -2.0}; }, u, rec), Error);
}

TEST_CASE("manufactured agreement makes the effectivity exactly one") {
    const auto mesh = generate(MeshFamily::T5, 4);
    auto u = [](Point2 p) { return p.x * p.x + p.y; };
    auto grad_u = [](Point2 p) { return Point2{2.0 * p.x, 1.0}; };
    const auto dofs = interpolate(u, mesh);
    RecoveredField rec;
    rec.gx = interpolate([&](Point2 p) { return grad_u(p).x; }, mesh);
    rec.gy = interpolate([&](Point2 p) { return grad_u(p).y; }, mesh);
    // Pi0 reproduces the linear exact gradient, so numerator == denominator
    CHECK(effectivity(mesh, grad_u, dofs, rec) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compute_indicators aggregates and marks consistently") {
    const auto mesh = generate(MeshFamily::T6, 4, 21);
    const auto tc = case1();
    const auto sol = solve_case(mesh, tc);
    const auto rec = recover_field(mesh, sol.u);
    const auto ind = compute_indicators(mesh, sol.u, rec, 0.4);
    double total2 = 0.0;
    for (double e : ind.eta) total2 += e * e;
    CHECK(ind.eta_global == doctest::Approx(std::sqrt(total2)).epsilon(1e-12));
    CHECK(!ind.marked.empty());
    CHECK(ind.marked == dorfler_mark(ind.eta, 0.4));
}
