#ifndef POTLAB_TEST_HELPERS_HPP
#define POTLAB_TEST_HELPERS_HPP

#include <string>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab::testing {

// Unit path v0 - v1 - ... - v{n-1}, mu = 1, sigma defaulted.
inline MetricMeasureGraph unit_path(int n, bool last_frontier = false) {
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        verts.push_back({"v" + std::to_string(i / 10) + std::to_string(i % 10), 1.0,
                         last_frontier && i == n - 1});
        if (i > 0) edges.push_back({i - 1, i, 1.0, -1.0});
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

// Brute-force all-pairs shortest paths (Floyd-Warshall) over edge lengths.
inline std::vector<std::vector<double>> all_pairs_oracle(const MetricMeasureGraph& g) {
    int n = g.vertex_count();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
    for (int i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const Edge& e : g.edges()) {
        d[e.u][e.v] = std::min(d[e.u][e.v], e.len);
        d[e.v][e.u] = std::min(d[e.v][e.u], e.len);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

}  // namespace potlab::testing

#endif
