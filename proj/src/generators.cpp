#include "potlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

namespace potlab {

using nlohmann::json;

namespace {

std::string padded_id(const char* prefix, int k, int width = 6) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, k);
    return buf;
}

MetricMeasureGraph make_path(const json& params) {
    int n = params.at("count").get<int>();
    if (n < 2) throw GraphError("path needs count >= 2");
    std::string frontier = params.value("frontier", "last");
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        bool f = (frontier == "both" && (i == 0 || i == n - 1)) ||
                 (frontier == "last" && i == n - 1);
        verts.push_back({padded_id("v", i), 1.0, f});
        if (i > 0) edges.push_back({i - 1, i, 1.0, -1.0});
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

MetricMeasureGraph make_cycle(const json& params) {
    int n = params.at("count").get<int>();
    if (n < 3) throw GraphError("cycle needs count >= 3");
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        verts.push_back({padded_id("v", i), 1.0, false});
        edges.push_back({i, (i + 1) % n, 1.0, -1.0});
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

MetricMeasureGraph make_grid(const json& params) {
    int rows = params.at("rows").get<int>();
    int cols = params.at("cols").get<int>();
    if (rows < 2 || cols < 2) throw GraphError("grid needs rows, cols >= 2");
    bool boundary_frontier = params.value("boundary_frontier", true);
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    auto at = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            bool f = boundary_frontier && (r == 0 || c == 0 || r == rows - 1 || c == cols - 1);
            verts.push_back({padded_id("g", at(r, c)), 1.0, f});
        }
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({at(r, c), at(r, c + 1), 1.0, -1.0});
            if (r + 1 < rows) edges.push_back({at(r, c), at(r + 1, c), 1.0, -1.0});
        }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

MetricMeasureGraph make_tree(const json& params) {
    int b = params.value("branching", 2);
    int depth = params.at("depth").get<int>();
    if (b < 2 || depth < 1) throw GraphError("tree needs branching >= 2, depth >= 1");
    bool leaves_frontier = params.value("leaves_frontier", true);
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    // Breadth-first node numbering: children of k are k*b+1 .. k*b+b.
    long long total = 0, layer = 1;
    for (int d = 0; d <= depth; ++d, layer *= b) total += layer;
    if (total > 2'000'000) throw GraphError("tree too large");
    long long first_leaf = total - layer / b;
    for (long long k = 0; k < total; ++k) {
        bool f = leaves_frontier && k >= first_leaf;
        verts.push_back({padded_id("t", static_cast<int>(k), 8), 1.0, f});
        if (k > 0) edges.push_back({static_cast<int>((k - 1) / b), static_cast<int>(k), 1.0, -1.0});
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

MetricMeasureGraph make_hyperbolic_disk(const json& params) {
    int n = params.value("n", 2);
    if (n != 2) throw GraphError("hyperbolic_disk_graph supports n = 2 only");
    double R = params.at("R").get<double>();
    int M = params.at("M").get<int>();
    int N = params.at("N").get<int>();
    if (!(R > 0.0) || M < 2 || N < 3) throw GraphError("hyperbolic_disk_graph needs R > 0, M >= 2, N >= 3");
    const double dr = R / M;
    const double dtheta = 2.0 * M_PI / N;

    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    // Center cell covers the disk of radius dr/2.
    verts.push_back({"c", 2.0 * M_PI * (std::cosh(dr / 2.0) - 1.0), false});
    auto at = [&](int i, int j) { return 1 + (i - 1) * N + j; };  // ring i >= 1
    for (int i = 1; i <= M; ++i) {
        double r = i * dr;
        double mu = std::sinh(r) * dr * dtheta;  // polar Jacobian cell volume
        for (int j = 0; j < N; ++j)
            verts.push_back({padded_id("h", at(i, j), 7), mu, i == M});
    }
    for (int j = 0; j < N; ++j) edges.push_back({0, at(1, j), dr, -1.0});
    for (int i = 1; i <= M; ++i) {
        double r = i * dr;
        for (int j = 0; j < N; ++j) {
            edges.push_back({at(i, j), at(i, (j + 1) % N), std::sinh(r) * dtheta, -1.0});
            if (i < M) edges.push_back({at(i, j), at(i + 1, j), dr, -1.0});
        }
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

// Spine path realizing V(B(x0, r_i)) = (C_d+1)^i * mu0 exactly at the stair
// radii r_i = 2^i: the shell between distances 2^i and 2^{i+1}-1 holds 2^i
// unit-spaced vertices sharing mass C_d*(C_d+1)^i*mu0.
MetricMeasureGraph make_staircase(const json& params) {
    double cd = params.value("C_d", 2.0);
    int stairs = params.at("stairs").get<int>();
    double mu0 = params.value("mu0", 1.0);
    if (!(cd > 1.0) || stairs < 3 || !(mu0 > 0.0))
        throw GraphError("exact_growth_staircase needs C_d > 1, stairs >= 3, mu0 > 0");
    long long length = (1LL << stairs);  // vertices at distances 0 .. 2^stairs - 1
    if (length > 2'000'000) throw GraphError("staircase too large");

    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    verts.push_back({padded_id("s", 0, 8), mu0, false});
    for (int i = 0; i < stairs; ++i) {
        long long shell_width = 1LL << i;
        double mass_per_vertex = cd * std::pow(cd + 1.0, i) * mu0 / static_cast<double>(shell_width);
        for (long long k = 0; k < shell_width; ++k) {
            int idx = static_cast<int>(verts.size());
            bool last = (i == stairs - 1 && k == shell_width - 1);
            verts.push_back({padded_id("s", idx, 8), mass_per_vertex, last});
            edges.push_back({idx - 1, idx, 1.0, -1.0});
        }
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

}  // namespace

MetricMeasureGraph generate_graph(const std::string& kind, const json& params) {
    if (kind == "path") return make_path(params);
    if (kind == "cycle") return make_cycle(params);
    if (kind == "grid") return make_grid(params);
    if (kind == "tree") return make_tree(params);
    if (kind == "hyperbolic_disk_graph") return make_hyperbolic_disk(params);
    if (kind == "exact_growth_staircase") return make_staircase(params);
    throw GraphError("unknown generator kind \"" + kind + "\"");
}

MetricMeasureGraph random_connected_graph(int n_vertices, int extra_edges, std::uint64_t seed) {
    if (n_vertices < 2) throw GraphError("random graph needs >= 2 vertices");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::vector<Vertex> verts;
    for (int i = 0; i < n_vertices; ++i) verts.push_back({padded_id("r", i), weight(rng), false});

    std::vector<Edge> edges;
    std::set<std::pair<int, int>> used;
    for (int i = 1; i < n_vertices; ++i) {
        int parent = static_cast<int>(rng() % i);
        edges.push_back({parent, i, weight(rng), weight(rng)});
        used.insert({parent, i});
    }
    int attempts = 0;
    while (extra_edges > 0 && attempts++ < 100 * extra_edges) {
        int a = static_cast<int>(rng() % n_vertices);
        int b = static_cast<int>(rng() % n_vertices);
        if (a == b) continue;
        auto key = std::minmax(a, b);
        if (used.count({key.first, key.second})) continue;
        used.insert({key.first, key.second});
        edges.push_back({a, b, weight(rng), weight(rng)});
        --extra_edges;
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

}  // namespace potlab
