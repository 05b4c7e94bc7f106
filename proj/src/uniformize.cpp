#include "potlab/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace potlab {

namespace {

double four_point_defect(const std::vector<std::vector<double>>& d, int x, int y, int z, int w) {
    double a = d[x][y] + d[z][w];
    double b = d[x][z] + d[y][w];
    double c = d[x][w] + d[y][z];
    double hi = std::max({a, b, c});
    double mid = a + b + c - hi - std::min({a, b, c});
    return (hi - mid) / 2.0;
}

}  // namespace

HyperbolicityReport gromov_delta(const MetricMeasureGraph& g, long long quadruple_budget,
                                 std::uint64_t seed) {
    const int n = g.vertex_count();
    std::vector<std::vector<double>> d(n);
    for (int i = 0; i < n; ++i) d[i] = g.distances_from(i);

    HyperbolicityReport rep;
    long long total = static_cast<long long>(n) * n * n * n;
    if (total <= quadruple_budget) {
        rep.exhaustive = true;
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y)
                for (int z = y + 1; z < n; ++z)
                    for (int w = z + 1; w < n; ++w) {
                        rep.delta = std::max(rep.delta, four_point_defect(d, x, y, z, w));
                        ++rep.quadruples;
                    }
        rep.coverage = 1.0;
        return rep;
    }
    std::mt19937_64 rng(seed);
    for (long long k = 0; k < quadruple_budget; ++k) {
        int x = static_cast<int>(rng() % n), y = static_cast<int>(rng() % n);
        int z = static_cast<int>(rng() % n), w = static_cast<int>(rng() % n);
        rep.delta = std::max(rep.delta, four_point_defect(d, x, y, z, w));
        ++rep.quadruples;
    }
    rep.coverage = static_cast<double>(quadruple_budget) / static_cast<double>(total);
    return rep;
}

double rough_starlike_constant(const MetricMeasureGraph& g, int z0) {
    VertexSet frontier = g.frontier_vertices();
    if (frontier.empty()) throw GraphError("rough starlikeness needs frontier vertices");
    auto sp = g.dijkstra(z0);
    std::vector<bool> on_ray(g.vertex_count(), false);
    for (int f : frontier)
        for (int v = f; v >= 0; v = sp.parent_vertex[v]) on_ray[v] = true;
    on_ray[z0] = true;
    VertexSet rays;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (on_ray[v]) rays.push_back(v);
    auto from_rays = g.dijkstra(rays);
    double m = 0.0;
    for (double dv : from_rays.dist) m = std::max(m, dv);
    return m;
}

UniformizedGraph uniformized_graph(const MetricMeasureGraph& g,
                                   const UniformizationParams& params) {
    if (!(params.eps > 0.0) || !(params.beta > 0.0))
        throw GraphError("uniformization needs eps > 0 and beta > 0");
    if (params.z0 < 0 || params.z0 >= g.vertex_count())
        throw GraphError("uniformization base vertex out of range");

    UniformizedGraph ug;
    ug.base = &g;
    ug.params = params;
    const auto& dist = g.distances_from(params.z0);
    const double eps = params.eps;

    ug.rho_eps.resize(g.vertex_count());
    ug.mu_beta.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        ug.rho_eps[v] = std::exp(-eps * dist[v]);
        ug.mu_beta[v] = std::exp(-params.beta * dist[v]) * g.vertex(v).mu;
    }

    ug.w_eps.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        double a = dist[ed.u], b = dist[ed.v];
        if (a == b) {
            ug.w_eps[e] = ed.len * std::exp(-eps * a);
        } else {
            // Exact integral of e^{-eps t} with t affine from a to b along the edge.
            ug.w_eps[e] = ed.len * (std::exp(-eps * std::min(a, b)) - std::exp(-eps * std::max(a, b))) /
                          (eps * std::abs(b - a));
        }
    }
    return ug;
}

std::vector<double> UniformizedGraph::distances_from(const VertexSet& sources) const {
    return base->dijkstra(sources, &w_eps).dist;
}

double UniformizedGraph::distance(int x, int y) const {
    return base->dijkstra(VertexSet{x}, &w_eps).dist[y];
}

double boundary_distance(const UniformizedGraph& ug, int v) {
    VertexSet frontier = ug.base->frontier_vertices();
    if (frontier.empty()) throw GraphError("boundary distance needs frontier vertices");
    return ug.distances_from(frontier)[v];
}

ComparisonEstimates comparison_constants(const UniformizedGraph& ug, const VertexSet& sample) {
    VertexSet frontier = ug.base->frontier_vertices();
    if (frontier.empty()) throw GraphError("comparison constants need frontier vertices");
    auto dist_to_frontier = ug.base->dijkstra(frontier, &ug.w_eps).dist;

    ComparisonEstimates out;
    for (int v : sample) {
        if (ug.base->vertex(v).frontier) continue;
        double ratio = dist_to_frontier[v] / ug.rho_eps[v];
        out.sample.push_back(v);
        out.ratios.push_back(ratio);
        if (ratio > 0.0) out.k1 = std::max({out.k1, ratio, 1.0 / ratio});
    }
    return out;
}

std::vector<VertexSet> boundary_clusters(const UniformizedGraph& ug, double eta) {
    if (!(eta > 0.0)) throw GraphError("cluster resolution must be positive");
    VertexSet frontier = ug.base->frontier_vertices();
    const int m = static_cast<int>(frontier.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (int i = 0; i < m; ++i) {
        auto dist = ug.base->dijkstra(VertexSet{frontier[i]}, &ug.w_eps).dist;
        for (int j = i + 1; j < m; ++j)
            if (dist[frontier[j]] <= eta) parent[find(i)] = find(j);
    }
    std::vector<VertexSet> clusters;
    std::vector<int> root_index(m, -1);
    for (int i = 0; i < m; ++i) {
        int r = find(i);
        if (root_index[r] < 0) {
            root_index[r] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[root_index[r]].push_back(frontier[i]);
    }
    return clusters;
}

}  // namespace potlab
