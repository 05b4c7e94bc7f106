#include "potlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

namespace potlab {

MetricMeasureGraph::MetricMeasureGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : verts_(std::move(vertices)), edges_(std::move(edges)) {
    const int n = static_cast<int>(verts_.size());
    if (n == 0) throw GraphError("graph has no vertices");

    for (int i = 0; i < n; ++i) {
        const Vertex& v = verts_[i];
        if (!(v.mu > 0.0))
            throw GraphError("nonpositive vertex measure at vertex '" + v.id + "'");
        if (!index_.emplace(v.id, i).second)
            throw GraphError("duplicate vertex id '" + v.id + "'");
    }

    // Tie-break rank: lexicographic order of ids.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return verts_[a].id < verts_[b].id; });
    rank_.resize(n);
    for (int i = 0; i < n; ++i) rank_[order[i]] = i;

    adj_.resize(n);
    std::set<std::pair<int, int>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        Edge& ed = edges_[e];
        if (ed.u < 0 || ed.u >= n || ed.v < 0 || ed.v >= n)
            throw GraphError("edge endpoint out of range");
        if (ed.u == ed.v)
            throw GraphError("self-loop at vertex '" + verts_[ed.u].id + "'");
        auto key = std::minmax(ed.u, ed.v);
        if (!seen.insert({key.first, key.second}).second)
            throw GraphError("parallel edge between '" + verts_[ed.u].id + "' and '" +
                             verts_[ed.v].id + "'");
        if (!(ed.len > 0.0))
            throw GraphError("nonpositive edge length between '" + verts_[ed.u].id + "' and '" +
                             verts_[ed.v].id + "'");
        if (ed.sigma < 0.0)  // absent marker: averaged vertex measure along the edge
            ed.sigma = ed.len * (verts_[ed.u].mu + verts_[ed.v].mu) / 2.0;
        if (!(ed.sigma > 0.0))
            throw GraphError("nonpositive edge measure between '" + verts_[ed.u].id + "' and '" +
                             verts_[ed.v].id + "'");
        adj_[ed.u].push_back({ed.v, static_cast<int>(e)});
        adj_[ed.v].push_back({ed.u, static_cast<int>(e)});
    }
    for (auto& nb : adj_)
        std::sort(nb.begin(), nb.end(), [&](const auto& a, const auto& b) {
            return rank_[a.first] < rank_[b.first];
        });

    // Connectivity check; report the component cut off from vertex 0.
    std::vector<bool> vis(n, false);
    std::vector<int> stack = {0};
    vis[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& [w, e] : adj_[v])
            if (!vis[w]) {
                vis[w] = true;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != n) {
        std::string offenders;
        for (int i = 0; i < n && offenders.size() < 200; ++i)
            if (!vis[i]) offenders += (offenders.empty() ? "" : ",") + verts_[i].id;
        throw GraphError("graph is disconnected; unreachable component contains {" + offenders +
                         "}");
    }

    total_mass_ = 0.0;
    for (const Vertex& v : verts_) total_mass_ += v.mu;
}

int MetricMeasureGraph::find_vertex(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

int MetricMeasureGraph::require_vertex(const std::string& id) const {
    int v = find_vertex(id);
    if (v < 0) throw GraphError("unknown vertex id '" + id + "'");
    return v;
}

std::optional<int> MetricMeasureGraph::find_edge(int u, int v) const {
    for (const auto& [w, e] : adj_[u])
        if (w == v) return e;
    return std::nullopt;
}

VertexSet MetricMeasureGraph::frontier_vertices() const {
    VertexSet out;
    for (int i = 0; i < vertex_count(); ++i)
        if (verts_[i].frontier) out.push_back(i);
    return out;
}

MetricMeasureGraph::ShortestPaths MetricMeasureGraph::dijkstra(
    const VertexSet& sources, const std::vector<double>* edge_costs,
    const std::vector<bool>* blocked) const {
    const int n = vertex_count();
    ShortestPaths sp;
    sp.dist.assign(n, kInf);
    sp.parent_vertex.assign(n, -1);
    sp.parent_edge.assign(n, -1);

    using Item = std::pair<double, int>;  // (dist, id rank); rank resolves ties
    auto cmp = [](const Item& a, const Item& b) { return a > b; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    std::vector<int> by_rank(n, -1);
    for (int i = 0; i < n; ++i) by_rank[rank_[i]] = i;

    for (int s : sources) {
        if (s < 0 || s >= n) throw GraphError("dijkstra source out of range");
        if (blocked && (*blocked)[s]) continue;
        sp.dist[s] = 0.0;
        pq.push({0.0, rank_[s]});
    }
    std::vector<bool> done(n, false);
    while (!pq.empty()) {
        auto [d, rk] = pq.top();
        pq.pop();
        int v = by_rank[rk];
        if (done[v] || d > sp.dist[v]) continue;
        done[v] = true;
        for (const auto& [w, e] : adj_[v]) {
            if (done[w] || (blocked && (*blocked)[w])) continue;
            double c = edge_costs ? (*edge_costs)[e] : edges_[e].len;
            double nd = d + c;
            // Parents only ever point at settled vertices, so chains are
            // acyclic; equal-distance ties resolve to the smaller id rank.
            if (nd < sp.dist[w] ||
                (nd == sp.dist[w] && sp.parent_vertex[w] >= 0 &&
                 rank_[v] < rank_[sp.parent_vertex[w]])) {
                sp.dist[w] = nd;
                sp.parent_vertex[w] = v;
                sp.parent_edge[w] = e;
                pq.push({nd, rank_[w]});
            }
        }
    }
    return sp;
}

MetricMeasureGraph::ShortestPaths MetricMeasureGraph::dijkstra(
    int source, const std::vector<double>* edge_costs) const {
    return dijkstra(VertexSet{source}, edge_costs);
}

double MetricMeasureGraph::distance(int x, int y) const { return distances_from(x)[y]; }

const std::vector<double>& MetricMeasureGraph::distances_from(int x0) const {
    auto it = dist_cache_.find(x0);
    if (it != dist_cache_.end()) return it->second;
    auto sp = dijkstra(x0);
    return dist_cache_.emplace(x0, std::move(sp.dist)).first->second;
}

double MetricMeasureGraph::diameter_lower_bound() const {
    const auto& d0 = distances_from(0);
    double m = 0.0;
    int far = 0;
    for (int i = 0; i < vertex_count(); ++i)
        if (d0[i] > m) {
            m = d0[i];
            far = i;
        }
    const auto& d1 = distances_from(far);
    for (double d : d1) m = std::max(m, d);
    return m;
}

VertexSet ball(const MetricMeasureGraph& g, int x0, double r) {
    if (x0 < 0 || x0 >= g.vertex_count()) throw GraphError("unknown vertex index for ball center");
    if (r < 0.0) throw GraphError("negative ball radius");
    const auto& dist = g.distances_from(x0);
    VertexSet out;
    for (int i = 0; i < g.vertex_count(); ++i)
        if (dist[i] < r) out.push_back(i);
    return out;
}

std::vector<std::pair<double, double>> volume_growth(const MetricMeasureGraph& g, int x0,
                                                     const std::vector<double>& radii) {
    if (radii.empty()) throw GraphError("empty radii list");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw GraphError("radii must be strictly increasing");
    const auto& dist = g.distances_from(x0);
    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    for (double r : radii) {
        double v = 0.0;
        for (int i = 0; i < g.vertex_count(); ++i)
            if (dist[i] < r) v += g.vertex(i).mu;
        out.push_back({r, v});
    }
    return out;
}

namespace {

std::vector<VertexSet> complement_components(const MetricMeasureGraph& g,
                                             const std::vector<bool>& in_ball) {
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    std::vector<VertexSet> comps;
    for (int i = 0; i < n; ++i) {
        if (in_ball[i] || comp[i] >= 0) continue;
        VertexSet cur;
        std::vector<int> stack = {i};
        comp[i] = static_cast<int>(comps.size());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            cur.push_back(v);
            for (const auto& [w, e] : g.neighbors(v)) {
                if (in_ball[w] || comp[w] >= 0) continue;
                comp[w] = comp[i];
                stack.push_back(w);
            }
        }
        std::sort(cur.begin(), cur.end());
        comps.push_back(std::move(cur));
    }
    return comps;
}

}  // namespace

EndsDecomposition detect_ends(const MetricMeasureGraph& g, int x0, double r) {
    VertexSet b = ball(g, x0, r);
    if (b.empty()) throw GraphError("ball is empty; cannot decompose ends");
    if (static_cast<int>(b.size()) == g.vertex_count())
        throw GraphError("ball covers the whole graph");
    std::vector<bool> in_ball(g.vertex_count(), false);
    for (int v : b) in_ball[v] = true;

    EndsDecomposition out;
    out.base = x0;
    out.radius = r;
    for (auto& comp : complement_components(g, in_ball)) {
        bool touches_frontier = false;
        for (int v : comp)
            if (g.vertex(v).frontier) {
                touches_frontier = true;
                break;
            }
        (touches_frontier ? out.ends : out.bounded_components).push_back(std::move(comp));
    }
    return out;
}

EndsScan ends_stability_scan(const MetricMeasureGraph& g, int x0,
                             const std::vector<double>& radii) {
    EndsScan scan;
    for (double r : radii) {
        EndsDecomposition d = detect_ends(g, x0, r);
        scan.radii.push_back(r);
        scan.counts.push_back(static_cast<int>(d.ends.size()));
    }
    scan.stabilization_radius = scan.radii.empty() ? 0.0 : scan.radii.back();
    for (int i = static_cast<int>(scan.counts.size()) - 1; i >= 0; --i) {
        if (scan.counts[i] != scan.counts.back()) break;
        scan.stabilization_radius = scan.radii[i];
    }
    return scan;
}

GeometryParams estimate_geometry(const MetricMeasureGraph& g, const std::vector<double>& scales,
                                 const VertexSet& sample, const GeometryOptions& opts) {
    if (scales.size() < 2) throw GraphError("estimate_geometry needs at least 2 scales");
    VertexSet pts = sample;
    if (pts.empty())
        for (int i = 0; i < g.vertex_count(); ++i) pts.push_back(i);

    GeometryParams out;
    out.r0 = opts.r0;
    out.lambda = opts.lambda;

    double cd = 1.0;
    double qmin = kInf, smax = -kInf;
    for (int x : pts) {
        const auto& dist = g.distances_from(x);
        auto vol = [&](double r) {
            double v = 0.0;
            for (int i = 0; i < g.vertex_count(); ++i)
                if (dist[i] < r) v += g.vertex(i).mu;
            return v;
        };
        double prev_r = -1.0, prev_v = -1.0;
        for (double r : scales) {
            double v1 = vol(r), v2 = vol(2.0 * r);
            if (v1 > 0.0) cd = std::max(cd, v2 / v1);
            if (prev_v > 0.0 && v1 > 0.0 && r > prev_r) {
                double slope = (std::log(v1) - std::log(prev_v)) / (std::log(r) - std::log(prev_r));
                qmin = std::min(qmin, slope);
                smax = std::max(smax, slope);
            }
            prev_r = r;
            prev_v = v1;
        }
    }
    out.c_d = cd;
    out.q_lower = std::isfinite(qmin) ? qmin : 0.0;
    out.s_upper = std::isfinite(smax) ? smax : 0.0;

    // Poincare probe: random potentials on sampled balls give a lower bound
    // on the best constant in the (p,p)-Poincare inequality with p = 2.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double cpi = 0.0;
    for (int trial = 0; trial < opts.poincare_trials; ++trial) {
        int x = pts[trial % pts.size()];
        double r = scales[trial % scales.size()];
        VertexSet b = ball(g, x, r);
        VertexSet bl = ball(g, x, opts.lambda * r);
        if (b.size() < 2) continue;
        std::vector<double> u(g.vertex_count(), 0.0);
        for (int v : bl) u[v] = unif(rng);
        double mass = 0.0, mean = 0.0;
        for (int v : b) {
            mass += g.vertex(v).mu;
            mean += g.vertex(v).mu * u[v];
        }
        mean /= mass;
        double osc = 0.0;
        for (int v : b) osc += g.vertex(v).mu * std::abs(u[v] - mean);
        osc /= mass;
        std::vector<bool> in_bl(g.vertex_count(), false);
        for (int v : bl) in_bl[v] = true;
        double energy = 0.0, lmass = 0.0;
        for (int v : bl) lmass += g.vertex(v).mu;
        for (const Edge& e : g.edges())
            if (in_bl[e.u] && in_bl[e.v]) {
                double grad = std::abs(u[e.u] - u[e.v]) / e.len;
                energy += e.sigma * grad * grad;
            }
        if (energy > 0.0) cpi = std::max(cpi, osc / (r * std::sqrt(energy / lmass)));
    }
    out.c_pi = cpi;

    out.beta0 = out.c_d > 1.0 ? 17.0 * std::log(out.c_d) / (3.0 * out.r0) : 0.0;
    return out;
}

double set_distance(const MetricMeasureGraph& g, const VertexSet& from, const VertexSet& to) {
    auto sp = g.dijkstra(from);
    double best = kInf;
    for (int v : to) best = std::min(best, sp.dist[v]);
    return best;
}

ExhaustionSequence annular_exhaustion(const MetricMeasureGraph& g, int x0,
                                      const std::vector<double>& radii) {
    if (radii.size() < 2) throw GraphError("annular_exhaustion needs at least 2 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw GraphError("radii must be strictly increasing");

    ExhaustionSequence seq;
    seq.radii = radii;
    for (double r : radii) seq.omegas.push_back(ball(g, x0, r));

    for (std::size_t j = 0; j + 1 < seq.omegas.size(); ++j) {
        const VertexSet& inner = seq.omegas[j];
        const VertexSet& outer = seq.omegas[j + 1];
        if (inner.size() == outer.size())
            throw GraphError("consecutive balls coincide at step " + std::to_string(j) +
                             "; gap undefined");
        std::vector<bool> in_outer(g.vertex_count(), false);
        for (int v : outer) in_outer[v] = true;
        VertexSet complement;
        for (int i = 0; i < g.vertex_count(); ++i)
            if (!in_outer[i]) complement.push_back(i);
        // Gap from the closed inner ball, so that unit-spaced radii on a
        // unit-edge path give the continuum value r_{j+1} - r_j.
        const auto& dist = g.distances_from(x0);
        VertexSet closed_inner;
        for (int i = 0; i < g.vertex_count(); ++i)
            if (dist[i] <= radii[j]) closed_inner.push_back(i);
        double gap = complement.empty() ? kInf : set_distance(g, closed_inner, complement);
        seq.gaps.push_back(gap);
        std::vector<bool> in_inner(g.vertex_count(), false);
        for (int v : inner) in_inner[v] = true;
        double shell = 0.0;
        for (int v : outer)
            if (!in_inner[v]) shell += g.vertex(v).mu;
        seq.shell_measures.push_back(shell);
    }
    return seq;
}

}  // namespace potlab
