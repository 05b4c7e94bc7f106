#include <doctest.h>

#include <cmath>

#include "potlab/generators.hpp"
#include "potlab/uniformize.hpp"
#include "test_helpers.hpp"

using namespace potlab;
using potlab::testing::all_pairs_oracle;
using potlab::testing::unit_path;

namespace {

// Independent exhaustive four-point oracle over distinct quadruples.
double quadruple_oracle(const MetricMeasureGraph& g) {
    auto d = all_pairs_oracle(g);
    int n = g.vertex_count();
    double delta = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z)
                for (int w = z + 1; w < n; ++w) {
                    double a = d[x][y] + d[z][w];
                    double b = d[x][z] + d[y][w];
                    double c = d[x][w] + d[y][z];
                    double hi = std::max({a, b, c});
                    double mid = a + b + c - hi - std::min({a, b, c});
                    delta = std::max(delta, (hi - mid) / 2.0);
                }
    return delta;
}

MetricMeasureGraph double_ray(int arm) {
    // z0 in the middle, two opposite frontier-tipped rays of unit edges.
    std::vector<Vertex> verts{{"m", 1.0, false}};
    std::vector<Edge> edges;
    int idx = 1;
    for (int ray = 0; ray < 2; ++ray) {
        int prev = 0;
        for (int k = 0; k < arm; ++k, ++idx) {
            verts.push_back({"r" + std::to_string(ray) + "_" + std::to_string(k), 1.0,
                             k == arm - 1});
            edges.push_back({prev, idx, 1.0, -1.0});
            prev = idx;
        }
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

}  // namespace

TEST_CASE("trees and paths have four-point delta zero") {
    auto tree = generate_graph("tree", {{"branching", 2}, {"depth", 4}});
    CHECK(gromov_delta(tree, 4'000'000).delta == 0.0);
    auto path = unit_path(8);
    auto rep = gromov_delta(path, 10'000);
    CHECK(rep.exhaustive);
    CHECK(rep.delta == 0.0);
}

TEST_CASE("unit 4-cycle matches the exhaustive quadruple oracle") {
    auto g = generate_graph("cycle", {{"count", 4}});
    auto rep = gromov_delta(g, 1'000);
    CHECK(rep.exhaustive);
    CHECK(rep.delta == doctest::Approx(quadruple_oracle(g)));
    // Frozen: the only distinct quadruple pairs the two diagonals (2+2)
    // against two sides (1+1), defect (4-2)/2.
    CHECK(rep.delta == doctest::Approx(1.0));
}

TEST_CASE("sampled delta on a larger cycle stays within the exhaustive value") {
    auto g = generate_graph("cycle", {{"count", 16}});
    double exact = quadruple_oracle(g);
    auto rep = gromov_delta(g, 20'000, /*seed=*/7);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.coverage > 0.0);
    CHECK(rep.delta <= exact + 1e-12);
}

TEST_CASE("rough starlikeness: stars and bare paths are exactly starlike") {
    std::vector<Vertex> verts{{"z", 1.0, false}};
    std::vector<Edge> edges;
    for (int i = 1; i <= 5; ++i) {
        verts.push_back({"l" + std::to_string(i), 1.0, true});
        edges.push_back({0, i, 1.0, -1.0});
    }
    MetricMeasureGraph star(verts, edges);
    CHECK(rough_starlike_constant(star, 0) == doctest::Approx(0.0));

    auto path = unit_path(9, /*last_frontier=*/true);
    CHECK(rough_starlike_constant(path, 0) == doctest::Approx(0.0));
}

TEST_CASE("rough starlikeness on a grid matches brute force") {
    auto g = generate_graph("grid", {{"rows", 6}, {"cols", 6}});
    int z0 = 0;
    double m = rough_starlike_constant(g, z0);
    // Brute force: recompute ray union via parent chains of a fresh Dijkstra,
    // then exhaustively take min distance to the union per vertex.
    auto sp = g.dijkstra(z0);
    std::vector<int> rays;
    std::vector<bool> on(g.vertex_count(), false);
    for (int f : g.frontier_vertices())
        for (int v = f; v >= 0; v = sp.parent_vertex[v]) on[v] = true;
    auto d = all_pairs_oracle(g);
    double expect = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        double best = kInf;
        for (int u = 0; u < g.vertex_count(); ++u)
            if (on[u]) best = std::min(best, d[v][u]);
        expect = std::max(expect, best);
    }
    CHECK(m == doctest::Approx(expect));
}

TEST_CASE("uniformized ray distances telescope exactly") {
    auto g = generate_graph("path", {{"count", 65}, {"frontier", "last"}});
    for (double eps : {0.25, 0.5, 1.0}) {
        auto ug = uniformized_graph(g, {0, eps, 1.0});
        auto dist = ug.distances_from({0});
        for (int K : {1, 10, 32, 64})
            CHECK(dist[K] == doctest::Approx((1.0 - std::exp(-eps * K)) / eps).epsilon(1e-13));
    }
}

TEST_CASE("mu_beta follows the density formula and shrinks with beta") {
    auto g = generate_graph("path", {{"count", 10}, {"frontier", "last"}});
    std::vector<Vertex> verts(g.vertices().begin(), g.vertices().end());
    verts[3].mu = 2.0;  // distance 3 from the base
    MetricMeasureGraph g2(verts, std::vector<Edge>(g.edges().begin(), g.edges().end()));
    auto ug = uniformized_graph(g2, {0, 0.5, 1.0});
    CHECK(ug.mu_beta[3] == doctest::Approx(2.0 * std::exp(-3.0)));

    auto ug_bigger_beta = uniformized_graph(g2, {0, 0.5, 2.0});
    double t1 = 0.0, t2 = 0.0;
    for (int v = 0; v < g2.vertex_count(); ++v) {
        t1 += ug.mu_beta[v];
        t2 += ug_bigger_beta.mu_beta[v];
    }
    CHECK(t2 < t1);
    CHECK(t1 <= g2.total_mass());
}

TEST_CASE("uniformized weights never exceed base lengths") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto g = random_connected_graph(20, 10, seed + 13);
        auto ug = uniformized_graph(g, {0, 0.7, 1.3});
        for (int e = 0; e < g.edge_count(); ++e) CHECK(ug.w_eps[e] <= g.edge(e).len + 1e-15);
        auto d_eps = ug.distances_from({2});
        const auto& d = g.distances_from(2);
        for (int v = 0; v < g.vertex_count(); ++v) CHECK(d_eps[v] <= d[v] + 1e-12);
    }
}

TEST_CASE("gradient transformation consistency on slowly-varying edges") {
    auto g = generate_graph("path", {{"count", 40}, {"frontier", "last"}});
    // Mean-vs-integral quadrature error is ~(eps*len)^2/3 per edge; eps small
    // enough keeps it inside the 1e-6 assertion while rho varies < 1%.
    double eps = 0.001;
    auto ug = uniformized_graph(g, {0, eps, 1.0});
    const auto& dist = g.distances_from(0);
    std::vector<double> u(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) u[v] = std::sin(0.3 * dist[v]);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        double a = dist[ed.u], b = dist[ed.v];
        double rho_a = std::exp(-eps * a), rho_b = std::exp(-eps * b);
        if (std::abs(rho_a - rho_b) / std::max(rho_a, rho_b) >= 0.01) continue;
        double g_eps = std::abs(u[ed.u] - u[ed.v]) / ug.w_eps[e];
        double g_base = std::abs(u[ed.u] - u[ed.v]) / ed.len;
        double rho_avg = (rho_a + rho_b) / 2.0;
        CHECK(g_eps == doctest::Approx(g_base / rho_avg).epsilon(1e-6));
    }
}

TEST_CASE("boundary distance on the uniformized ray") {
    auto g = generate_graph("path", {{"count", 33}, {"frontier", "last"}});
    double eps = 0.5;
    int K = 32;
    auto ug = uniformized_graph(g, {0, eps, 1.0});
    for (int j : {0, 5, 16, 31})
        CHECK(boundary_distance(ug, j) ==
              doctest::Approx((std::exp(-eps * j) - std::exp(-eps * K)) / eps).epsilon(1e-12));
    CHECK(boundary_distance(ug, K) == doctest::Approx(0.0));
}

TEST_CASE("comparison constants on the ray match segment sums") {
    auto g = generate_graph("path", {{"count", 33}, {"frontier", "last"}});
    double eps = 0.5;
    int K = 32;
    auto ug = uniformized_graph(g, {0, eps, 1.0});
    auto cmp = comparison_constants(ug, {0, 4, 12});
    REQUIRE(cmp.ratios.size() == 3);
    int idx = 0;
    for (int j : {0, 4, 12}) {
        double expect = (1.0 - std::exp(-eps * (K - j))) / eps;
        CHECK(cmp.ratios[idx++] == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(cmp.k1 >= 1.0);
}

TEST_CASE("boundary clustering resolves the two ray tips") {
    auto g = double_ray(12);
    auto ug = uniformized_graph(g, {0, 1.0, 1.0});
    CHECK(boundary_clusters(ug, 0.5).size() == 2);
    CHECK(boundary_clusters(ug, 100.0).size() == 1);

    auto single = generate_graph("path", {{"count", 12}, {"frontier", "last"}});
    auto ug1 = uniformized_graph(single, {0, 1.0, 1.0});
    CHECK(boundary_clusters(ug1, 0.5).size() == 1);
}
