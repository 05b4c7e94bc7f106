#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "potlab/generators.hpp"
#include "potlab/modulus.hpp"
#include "test_helpers.hpp"

using namespace potlab;
using potlab::testing::unit_path;

namespace {

// Two-terminal series-parallel network builder with an independent
// conductance-recursion oracle. Parallel composition of bare edges would
// create parallel edges (disallowed), so every atom is a 2-edge series
// subdivision of one edge; conductance bookkeeping stays exact.
struct SPBuilder {
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    std::mt19937_64 rng;

    explicit SPBuilder(std::uint64_t seed) : rng(seed) {}

    int fresh_vertex() {
        int idx = static_cast<int>(verts.size());
        char buf[16];
        std::snprintf(buf, sizeof(buf), "n%04d", idx);
        verts.push_back({buf, 1.0, false});
        return idx;
    }

    // Adds a two-edge series atom between s and t with total conductance c
    // (each half has conductance 2c: len l/2, sigma chosen accordingly).
    void atom(int s, int t, double c) {
        int mid = fresh_vertex();
        std::uniform_real_distribution<double> len_dist(0.5, 1.5);
        for (int half : {0, 1}) {
            double len = len_dist(rng);
            double sigma = 2.0 * c * len * len;  // conductance sigma/len^2 = 2c
            edges.push_back({half == 0 ? s : mid, half == 0 ? mid : t, len, sigma});
        }
    }

    // Recursively builds between s and t; returns the exact conductance.
    double build(int s, int t, int depth) {
        std::uniform_real_distribution<double> c_dist(0.2, 3.0);
        if (depth == 0) {
            double c = c_dist(rng);
            atom(s, t, c);
            return c;
        }
        if (rng() % 2 == 0) {  // series
            int mid = fresh_vertex();
            double c1 = build(s, mid, depth - 1);
            double c2 = build(mid, t, depth - 1);
            return 1.0 / (1.0 / c1 + 1.0 / c2);
        }
        return build(s, t, depth - 1) + build(s, t, depth - 1);  // parallel
    }
};

}  // namespace

TEST_CASE("rho_length basics") {
    std::vector<Vertex> verts{{"a", 1.0, false}, {"b", 1.0, false}};
    std::vector<Edge> edges{{0, 1, 2.0, 1.0}};
    MetricMeasureGraph g(verts, edges);
    DensityField rho{{0.5}};
    CHECK(rho_length(g, rho, {0, 1}) == doctest::Approx(1.0));
    CHECK(rho_length(g, rho, {0}) == doctest::Approx(0.0));
}

TEST_CASE("shortest rho-path picks the cheaper route") {
    // Diamond: s-a-t and s-b-t; make the a-route cheap.
    std::vector<Vertex> verts{{"a", 1, false}, {"b", 1, false}, {"s", 1, false}, {"t", 1, false}};
    std::vector<Edge> edges{{2, 0, 1, 1}, {0, 3, 1, 1}, {2, 1, 1, 1}, {1, 3, 1, 1}};
    MetricMeasureGraph g(verts, edges);
    DensityField rho{{0.1, 0.1, 0.45, 0.45}};
    auto sp = shortest_rho_path(g, rho, {2}, {3});
    CHECK(sp.length == doctest::Approx(0.2));
    CHECK(sp.vertices == std::vector<int>{2, 0, 3});
}

TEST_CASE("shortest rho-path matches brute-force enumeration") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto g = random_connected_graph(10, 6, seed + 42);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        DensityField rho;
        for (int e = 0; e < g.edge_count(); ++e) rho.rho.push_back(unif(rng));

        double best = kInf;
        std::vector<bool> used(g.vertex_count(), false);
        std::function<void(int, double)> dfs = [&](int v, double acc) {
            if (v == g.vertex_count() - 1) {
                best = std::min(best, acc);
                return;
            }
            used[v] = true;
            for (const auto& [w, e] : g.neighbors(v))
                if (!used[w]) dfs(w, acc + rho.rho[e] * g.edge(e).len);
            used[v] = false;
        };
        dfs(0, 0.0);
        auto sp = shortest_rho_path(g, rho, {0}, {g.vertex_count() - 1});
        CHECK(sp.length == doctest::Approx(best));
    }
}

TEST_CASE("single edge modulus: sigma/len^p closed form") {
    std::vector<Vertex> verts{{"s", 1, false}, {"t", 1, false}};
    std::vector<Edge> edges{{0, 1, 2.0, 3.0}};
    MetricMeasureGraph g(verts, edges);
    auto res = modulus_connecting(g, {{0}, {1}}, 2.0, 1e-9);
    CHECK(res.value == doctest::Approx(0.75).epsilon(1e-6));  // 3 * (1/2)^2
    CHECK(res.rho.rho[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(res.converged);
}

TEST_CASE("two disjoint routes behave like parallel unit edges") {
    // Each route is a 2-edge subdivision with len 0.5, sigma 0.5 so that it
    // carries the energy of one unit edge with sigma 1.
    std::vector<Vertex> verts{{"a", 1, false}, {"b", 1, false}, {"s", 1, false}, {"t", 1, false}};
    std::vector<Edge> edges{
        {2, 0, 0.5, 0.5}, {0, 3, 0.5, 0.5}, {2, 1, 0.5, 0.5}, {1, 3, 0.5, 0.5}};
    MetricMeasureGraph g(verts, edges);
    auto res = modulus_connecting(g, {{2}, {3}}, 3.0, 1e-8);
    CHECK(res.value == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("two unit edges in series, p = 2") {
    auto g = unit_path(3);
    auto res = modulus_connecting(g, {{0}, {2}}, 2.0, 1e-9);
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(res.rho.rho[0] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(res.rho.rho[1] == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("p = 2 modulus equals series-parallel conductance") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SPBuilder b(seed * 31 + 5);
        int s = b.fresh_vertex(), t = b.fresh_vertex();
        double expected = b.build(s, t, 2 + static_cast<int>(seed % 2));
        MetricMeasureGraph g(b.verts, b.edges);
        auto res = modulus_connecting(g, {{s}, {t}}, 2.0, 1e-8);
        CHECK(res.value == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("modulus scales linearly in sigma") {
    auto g0 = random_connected_graph(14, 8, 9);
    std::vector<Vertex> verts(g0.vertices().begin(), g0.vertices().end());
    std::vector<Edge> edges(g0.edges().begin(), g0.edges().end());
    for (Edge& e : edges) e.sigma *= 3.0;
    MetricMeasureGraph g3(verts, edges);
    for (double p : {1.5, 2.0, 3.0}) {
        auto r0 = modulus_connecting(g0, {{0}, {13}}, p, 1e-8);
        auto r3 = modulus_connecting(g3, {{0}, {13}}, p, 1e-8);
        CHECK(r3.value == doctest::Approx(3.0 * r0.value).epsilon(1e-5));
    }
}

TEST_CASE("modulus monotone in the target set") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto g = random_connected_graph(16, 10, seed + 55);
        auto small = modulus_connecting(g, {{0}, {15}}, 2.0, 1e-8);
        auto large = modulus_connecting(g, {{0}, {14, 15}}, 2.0, 1e-8);
        CHECK(large.value >= small.value - 1e-7);
    }
}

TEST_CASE("modulus subadditive over disjoint route families") {
    // Diamond with disjoint routes: whole family vs each route alone.
    std::vector<Vertex> verts{{"a", 1, false}, {"b", 1, false}, {"s", 1, false}, {"t", 1, false}};
    std::vector<Edge> edges{
        {2, 0, 0.5, 0.5}, {0, 3, 0.5, 0.5}, {2, 1, 0.5, 0.7}, {1, 3, 0.5, 0.7}};
    MetricMeasureGraph g(verts, edges);
    auto whole = modulus_connecting(g, {{2}, {3}}, 2.0, 1e-8);
    auto via_a = modulus_connecting(g, {{2}, {3}, false, {1}}, 2.0, 1e-8);
    auto via_b = modulus_connecting(g, {{2}, {3}, false, {0}}, 2.0, 1e-8);
    CHECK(whole.value <= via_a.value + via_b.value + 1e-6);
}

TEST_CASE("unreachable target yields modulus zero") {
    auto g = unit_path(4, /*last_frontier=*/false);
    // Forbid the middle vertex: no path remains.
    auto res = modulus_connecting(g, {{0}, {3}, false, {1}}, 2.0, 1e-8);
    CHECK(res.value == 0.0);
    CHECK(res.active_paths.empty());
}

TEST_CASE("verify_admissible on optimum, zero, and scaled densities") {
    auto g = unit_path(3);
    CurveFamilySpec family{{0}, {2}};
    auto res = modulus_connecting(g, family, 2.0, 1e-9);
    CHECK(verify_admissible(g, res.rho, family, 1e-6).admissible);

    DensityField zero{{0.0, 0.0}};
    auto bad = verify_admissible(g, zero, family, 1e-6);
    CHECK_FALSE(bad.admissible);
    CHECK(bad.worst_path == std::vector<int>{0, 1, 2});

    DensityField half{{res.rho.rho[0] / 2.0, res.rho.rho[1] / 2.0}};
    CHECK_FALSE(verify_admissible(g, half, family, 1e-6).admissible);
}

TEST_CASE("p = 1 best-effort: series path value matches min-cut intuition") {
    // On a 2-edge unit series path the p -> 1 limit of the modulus is the
    // smallest sigma across a separating edge.
    std::vector<Vertex> verts{{"a", 1, false}, {"m", 1, false}, {"b", 1, false}};
    std::vector<Edge> edges{{0, 1, 1.0, 0.4}, {1, 2, 1.0, 0.9}};
    MetricMeasureGraph g(verts, edges);
    auto res = modulus_connecting(g, {{0}, {2}}, 1.0, 1e-7);
    CHECK(res.value == doctest::Approx(0.4).epsilon(1e-3));
}
