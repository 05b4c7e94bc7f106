#include <doctest.h>

#include <cmath>

#include "potlab/generators.hpp"
#include "potlab/witness.hpp"
#include "test_helpers.hpp"

using namespace potlab;
using potlab::testing::unit_path;

namespace {

MetricMeasureGraph double_ray(int arm) {
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

TEST_CASE("staircase witness on the exact-growth graph") {
    auto g = generate_graph("exact_growth_staircase", {{"C_d", 2.0}, {"stairs", 6}});
    auto f = staircase_witness(g, 0, 2.0, 2.0);

    auto volumes = f.parameters.at("volumes").get<std::vector<double>>();
    REQUIRE(volumes.size() >= 4);
    for (std::size_t i = 1; i < volumes.size(); ++i)
        CHECK(volumes[i] == doctest::Approx(3.0 * volumes[i - 1]));  // ratios exactly C_d + 1

    // phi(r_1) = (C_d mu_0)^{-1/p} = 1/sqrt(2)
    auto phi = f.parameters.at("phi").get<std::vector<double>>();
    CHECK(phi[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

    // Stair radii: r_{i+1} - r_i > r_i (the 2^i gap growth).
    const auto& radii = f.annulus_radii;
    for (std::size_t i = 1; i + 1 < radii.size(); ++i)
        CHECK(radii[i + 1] - radii[i] > radii[i]);

    // Energy within the paper-style geometric budget, p = 2: sum 2^{-pi} = 4/3.
    auto rep = evaluate_witness(g, f, 2.0, default_c_grid(f));
    CHECK(rep.energy <= 4.0 / 3.0 + 1e-9);
    CHECK(rep.energy > 0.0);

    // Per-stair mean deficit at least 1/(C_d+1) for every grid constant.
    for (double mean : rep.per_stair_mean) CHECK(mean >= (1.0 / 3.0) * (1.0 - 1e-2));
    for (const auto& verdict : rep.verdicts) CHECK(verdict == "diverging");
}

TEST_CASE("staircase witness needs three stairs") {
    auto g = unit_path(6);
    CHECK_THROWS_WITH_AS(staircase_witness(g, 0, 2.0, 2.0), doctest::Contains("3 achievable"),
                         GraphError);
}

TEST_CASE("ahlfors branch selection and lip bound") {
    auto fmin = ahlfors_witness(2.0, 2.0, 4.0);  // 1/2 < 1/4 + 1/2
    CHECK(fmin.kind == "ahlfors_min");
    CHECK(ahlfors_value(fmin, 4.0) == doctest::Approx(std::pow(4.0, -0.5)));
    CHECK(ahlfors_value(fmin, 0.5) == doctest::Approx(1.0));

    auto fmax = ahlfors_witness(2.0, 1.0, 3.0);  // 1 > 1/3 + 1/2
    CHECK(fmax.kind == "ahlfors_max");

    CHECK(ahlfors_lip_bound(fmin, 4.0) == doctest::Approx(0.0625));  // (1/2) * 4^{-3/2}

    CHECK_THROWS_AS(ahlfors_witness(2.0, 1.0, 2.0), GraphError);  // 1/p = 1/q + 1/s
}

TEST_CASE("punctured log witness validates the exponent range") {
    CHECK_NOTHROW(punctured_log_witness(0.25, 2.0, 100));
    CHECK_THROWS_AS(punctured_log_witness(0.5, 2.0, 100), GraphError);   // q = 1 - 1/p
    CHECK_THROWS_AS(punctured_log_witness(-0.5, 2.0, 100), GraphError);  // q = -1/p
    CHECK_THROWS_AS(punctured_log_witness(0.0, 2.0, 100), GraphError);
}

TEST_CASE("punctured log witness matches the 1-D quadrature oracle") {
    double q = 0.25, p = 2.0, T = 8.0;
    auto model = punctured_log_witness(q, p, 400, T);
    auto rep = evaluate_witness(model.graph, model.f, p, {0.0});

    // Energy oracle: int_1^{1+T} (q tau^{q-1})^p dtau.
    double oracle = 0.0, a = 1.0, b = 1.0 + T;
    double expnt = (q - 1.0) * p;
    oracle = std::pow(q, p) * (std::pow(b, expnt + 1.0) - std::pow(a, expnt + 1.0)) / (expnt + 1.0);
    CHECK(rep.energy == doctest::Approx(oracle).epsilon(0.01));

    // Mass oracle: int tau^{pq} dtau grows without bound in T.
    double mass = 0.0;
    for (int v = 0; v < model.graph.vertex_count(); ++v)
        mass += model.graph.vertex(v).mu * std::pow(model.f.values[v], p);
    double mass_oracle = (std::pow(b, p * q + 1.0) - 1.0) / (p * q + 1.0);
    CHECK(mass == doctest::Approx(mass_oracle).epsilon(0.02));
}

TEST_CASE("punctured log energy stable under mesh doubling, mass divergent in range") {
    double q = 0.25, p = 2.0;
    double e_prev = -1.0;
    for (int mesh : {100, 200, 400}) {
        auto model = punctured_log_witness(q, p, mesh, 8.0);
        double e = evaluate_witness(model.graph, model.f, p, {0.0}).energy;
        if (e_prev > 0.0) CHECK(std::abs(e - e_prev) / e_prev < 0.05);
        e_prev = e;
    }
    double m_prev = -1.0;
    for (double T : {8.0, 16.0, 32.0}) {
        auto model = punctured_log_witness(q, p, static_cast<int>(T * 50), T);
        double mass = 0.0;
        for (int v = 0; v < model.graph.vertex_count(); ++v)
            mass += model.graph.vertex(v).mu * std::pow(model.f.values[v], p);
        if (m_prev > 0.0) CHECK(mass / m_prev >= 1.8);
        m_prev = mass;
    }
}

TEST_CASE("two-ends witness on the double ray") {
    auto g = double_ray(10);
    auto ends = detect_ends(g, 0, 1.0);
    REQUIRE(ends.ends.size() == 2);
    auto f = two_ends_witness(g, ends, 0, /*tau=*/4.0);

    for (double v : f.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // u vanishes on the complement of the chosen end (the whole other ray).
    for (int v : ends.ends[1]) CHECK(f.values[v] == 0.0);
    // u = 1 deep inside the chosen end.
    int deep = ends.ends[0].back();
    CHECK(f.values[deep] == doctest::Approx(1.0));

    // Energy: tau^{-p} on each collar edge (unit slopes over tau), sigma = 1.
    double tau = 4.0;
    auto rep = evaluate_witness(g, f, 2.0, {0.0, 0.5, 1.0});
    double hand = 0.0;
    for (const Edge& e : g.edges()) {
        double slope = std::abs(f.values[e.u] - f.values[e.v]) / e.len;
        hand += e.sigma * slope * slope;
    }
    CHECK(rep.energy == doctest::Approx(hand));
    CHECK(rep.energy == doctest::Approx(4.0 * std::pow(1.0 / tau, 2.0)));  // 4 collar edges

    // For every c some end contributes a positive per-shell deficit.
    for (double floor : rep.floors) CHECK(floor >= 0.0);
}

TEST_CASE("two-ends witness rejects single-ended graphs") {
    auto g = unit_path(9, /*last_frontier=*/true);
    auto ends = detect_ends(g, 4, 1.0);
    CHECK_THROWS_AS(two_ends_witness(g, ends), GraphError);
}

TEST_CASE("parabolic staircase on a long path meets the energy schedule") {
    auto g = generate_graph("path", {{"count", 220}, {"frontier", "none"}});
    auto f = parabolic_staircase_witness(g, 0, 2.0, /*budget=*/3);
    auto stairs = f.parameters.at("stairs");
    REQUIRE(stairs.size() >= 1);
    double total = 0.0;
    for (const auto& st : stairs) {
        if (st.at("achieved").get<bool>())
            CHECK(st.at("energy").get<double>() < st.at("target").get<double>());
        total += st.at("energy").get<double>();
    }
    double budget_sum = 0.0;
    for (std::size_t k = 1; k <= stairs.size(); ++k) budget_sum += std::pow(2.0, -2.0 * k);
    CHECK(total <= budget_sum + 1e-9);

    // f nondecreasing in the distance from x0 along the path.
    const auto& dist = g.distances_from(0);
    for (int v = 1; v < g.vertex_count(); ++v) {
        CHECK(dist[v] == doctest::Approx(static_cast<double>(v)));
        CHECK(f.values[v] >= f.values[v - 1] - 1e-9);
    }
}

TEST_CASE("evaluate_witness on a constant function") {
    auto g = unit_path(10);
    WitnessFunction f;
    f.kind = "staircase";
    f.p = 2.0;
    f.x0 = 0;
    f.values.assign(10, 0.75);
    f.annulus_radii = {0.5, 3.0, 6.0, 9.5};
    auto rep = evaluate_witness(g, f, 2.0, {0.75, 0.0});
    CHECK(rep.energy == 0.0);
    for (double d : rep.deficits[0]) CHECK(d == 0.0);
    CHECK(rep.verdicts[0] == "inconclusive");
    for (double d : rep.deficits[1]) CHECK(d > 0.0);
    CHECK_THROWS_AS(evaluate_witness(g, f, 2.0, {}), GraphError);
}
