#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "potlab/capacity.hpp"
#include "potlab/generators.hpp"
#include "test_helpers.hpp"

using namespace potlab;
using potlab::testing::unit_path;

namespace {

// Independent dense-Laplacian oracle for p = 2.
double laplacian_oracle(const MetricMeasureGraph& g, const VertexSet& ones,
                        const VertexSet& zeros) {
    int n = g.vertex_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        double w = e.sigma / (e.len * e.len);
        L(e.u, e.u) += w;
        L(e.v, e.v) += w;
        L(e.u, e.v) -= w;
        L(e.v, e.u) -= w;
    }
    std::vector<int> role(n, -1);
    for (int v : ones) role[v] = 1;
    for (int v : zeros) role[v] = 0;
    std::vector<int> free;
    for (int v = 0; v < n; ++v)
        if (role[v] < 0) free.push_back(v);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int v : ones) u[v] = 1.0;
    if (!free.empty()) {
        int nf = static_cast<int>(free.size());
        Eigen::MatrixXd A(nf, nf);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(nf);
        for (int i = 0; i < nf; ++i) {
            for (int j = 0; j < nf; ++j) A(i, j) = L(free[i], free[j]);
            for (int v : ones) b[i] -= L(free[i], v) * 1.0;
        }
        Eigen::VectorXd x = A.ldlt().solve(b);
        for (int i = 0; i < nf; ++i) u[free[i]] = x[i];
    }
    double energy = 0.0;
    for (const Edge& e : g.edges()) {
        double grad = std::abs(u[e.u] - u[e.v]) / e.len;
        energy += e.sigma * grad * grad;
    }
    return energy;
}

}  // namespace

TEST_CASE("series path capacity, p = 2") {
    auto g = unit_path(3);
    auto u = dirichlet_minimize(g, {0}, {2}, 2.0, 1e-10);
    CHECK(u.u[1] == doctest::Approx(0.5));
    CHECK(capacity(g, {0}, {2}, 2.0, 1e-10).value == doctest::Approx(0.5));
}

TEST_CASE("single separating edge: sigma/len^p") {
    std::vector<Vertex> verts{{"a", 1, false}, {"b", 1, false}};
    std::vector<Edge> edges{{0, 1, 2.0, 3.0}};
    MetricMeasureGraph g(verts, edges);
    CHECK(capacity(g, {0}, {1}, 2.0, 1e-10).value == doctest::Approx(0.75));
}

TEST_CASE("boundary set validation") {
    auto g = unit_path(3);
    CHECK_THROWS_AS(dirichlet_minimize(g, {0}, {0, 2}, 2.0, 1e-8), GraphError);
    CHECK_THROWS_AS(dirichlet_minimize(g, {}, {2}, 2.0, 1e-8), GraphError);
}

TEST_CASE("p = 2 matches the dense Laplacian oracle on random graphs") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto g = random_connected_graph(30, 20, seed + 3);
        VertexSet E{0, 1}, F{28, 29};
        auto res = capacity(g, E, F, 2.0, 1e-10);
        CHECK(res.value == doctest::Approx(laplacian_oracle(g, E, F)).epsilon(1e-8));
    }
}

TEST_CASE("series path closed form for general p: k^{1-p}") {
    auto g = unit_path(5);  // 4 unit edges
    for (double p : {1.5, 3.0, 4.0}) {
        auto res = capacity(g, {0}, {4}, p, 1e-10);
        CHECK(res.value == doctest::Approx(std::pow(4.0, 1.0 - p)).epsilon(1e-6));
    }
}

TEST_CASE("minimizer obeys the maximum principle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto g = random_connected_graph(24, 14, seed + 77);
        for (double p : {1.5, 2.0, 3.0}) {
            auto u = dirichlet_minimize(g, {0}, {23}, p, 1e-8);
            for (double x : u.u) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
            }
        }
    }
}

TEST_CASE("capacity monotone under boundary-set inclusion") {
    auto g = random_connected_graph(20, 12, 11);
    double base = capacity(g, {0}, {18, 19}, 2.0, 1e-9).value;
    double bigger_e = capacity(g, {0, 1}, {18, 19}, 2.0, 1e-9).value;
    double smaller_f = capacity(g, {0}, {19}, 2.0, 1e-9).value;
    CHECK(bigger_e >= base - 1e-9);
    CHECK(smaller_f <= base + 1e-9);
}

TEST_CASE("cap equals mod on simple condensers") {
    auto g = unit_path(5);
    auto cmp = check_cap_eq_mod(g, 0, 0.5, 3.5, 2.0, 1e-8);
    // Condenser: {v0} against {v4}; 4 unit edges in series.
    CHECK(cmp.cap == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(cmp.relative_difference < 1e-4);
}

TEST_CASE("cap equals mod on random graphs across p") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto g = random_connected_graph(18, 10, seed + 21);
        for (double p : {1.5, 2.0, 3.0}) {
            auto cmp = check_cap_eq_mod(g, 0, 1.0, 3.0, p, 1e-8);
            CHECK(cmp.relative_difference < 1e-4);
        }
    }
}

TEST_CASE("annular capacity sequence nonincreasing in R") {
    auto g = generate_graph("grid", {{"rows", 15}, {"cols", 15}});
    int center = 7 * 15 + 7;
    double prev = kInf;
    for (double R : {2.5, 3.5, 4.5, 5.5, 6.5}) {
        std::vector<bool> in_outer(g.vertex_count(), false);
        for (int v : ball(g, center, R)) in_outer[v] = true;
        VertexSet comp;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (!in_outer[v]) comp.push_back(v);
        double cap = capacity(g, ball(g, center, 1.5), comp, 2.0, 1e-9).value;
        CHECK(cap <= prev + 1e-8);
        prev = cap;
    }
}

TEST_CASE("binary tree classifies hyperbolic with the recursion-limit floor") {
    auto g = generate_graph("tree", {{"branching", 2}, {"depth", 9}});
    std::vector<double> schedule;
    for (int k = 2; k <= 9; ++k) schedule.push_back(k - 0.5);
    auto rep = classify_parabolic(g, 0, 2.0, 0.5, schedule);
    CHECK(rep.verdict == "hyperbolic");
    // Series-parallel conductance recursion: C_1 = 2, C_D = 2 C_{D-1} / (1 + C_{D-1}),
    // limit 1. The root-to-depth-k capacity is 1/(1 - 2^{-k}) -> 1.
    double recursion = 2.0;
    for (int d = 2; d <= 9; ++d) recursion = 2.0 * recursion / (1.0 + recursion);
    CHECK(rep.capacities.back() == doctest::Approx(recursion).epsilon(1e-6));
    CHECK(std::abs(rep.capacities.back() - 1.0) < 0.05);
}

TEST_CASE("grid classifies parabolic at a desk-scale divergence threshold") {
    auto g = generate_graph("grid", {{"rows", 21}, {"cols", 21}});
    int center = 10 * 21 + 10;
    std::vector<double> schedule;
    for (int k = 2; k <= 10; ++k) schedule.push_back(k + 0.5);
    ClassificationThresholds th;
    th.divergence_sum = 0.25;  // desk-scale truncation of the divergent shell sum
    auto rep = classify_parabolic(g, center, 2.0, 1.5, schedule, th);
    CHECK(rep.verdict == "parabolic");
    CHECK(rep.shell_partial_sums.back() > th.divergence_sum);
    // Capacity decays like 1/log R: strictly decreasing, no plateau.
    for (std::size_t i = 1; i < rep.capacities.size(); ++i)
        CHECK(rep.capacities[i] < rep.capacities[i - 1]);
}

TEST_CASE("synthetic r^2 volume growth gives log-divergent partial sums") {
    // Quadrature of (r/V)^{1/(p-1)} dr with V = r^2, p = 2 is the harmonic
    // integral: partial sums grow like log R and pass any fixed threshold.
    double sum = 0.0, prev = 1.0;
    for (double r = 2.0; r <= 4096.0; r *= 2.0) {
        sum += (r / (r * r)) * (r - prev);
        prev = r;
    }
    CHECK(sum > doctest::Approx(0.5 * std::log(4096.0)).epsilon(0.2));
    CHECK(sum > 10.0 * 0.5);  // exceeds a half-scaled divergence threshold
}

TEST_CASE("oversized schedule flags exhaustion with a partial sequence") {
    auto g = unit_path(5, /*last_frontier=*/true);
    auto rep = classify_parabolic(g, 0, 2.0, 0.5, {1.5, 2.5, 10.0, 20.0, 30.0});
    CHECK(rep.schedule_exhausted);
    CHECK(rep.capacities.size() < 3);
    CHECK(rep.verdict == "inconclusive");
}
