#ifndef POTLAB_GRAPH_HPP
#define POTLAB_GRAPH_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace potlab {

// Vertices and edges are referred to by dense indices internally; the
// string ids from the input document are kept for reporting and for the
// deterministic Dijkstra tie-break.
struct Vertex {
    std::string id;
    double mu = 1.0;
    bool frontier = false;
};

struct Edge {
    int u = -1;
    int v = -1;
    double len = 1.0;
    double sigma = 1.0;
};

// Sorted list of vertex indices.
using VertexSet = std::vector<int>;

constexpr double kInf = std::numeric_limits<double>::infinity();

class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

// Discretized metric measure space: vertex measures mu, edge lengths len,
// edge measure densities sigma, frontier marks standing in for ends at
// infinity. Immutable after construction; all members of this class are
// safe for concurrent use.
class MetricMeasureGraph {
public:
    // Validates invariants: connectivity, positive weights, no self-loops,
    // no parallel edges. sigma defaults to len*(mu(u)+mu(v))/2 when negative
    // is passed as the "absent" marker.
    MetricMeasureGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Vertex& vertex(int v) const { return verts_[v]; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Vertex>& vertices() const { return verts_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // (neighbor vertex, edge index) pairs, sorted by tie-break rank of the
    // neighbor so that traversals are deterministic.
    const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_[v]; }

    int find_vertex(const std::string& id) const;  // -1 when absent
    int require_vertex(const std::string& id) const;
    std::optional<int> find_edge(int u, int v) const;

    // Lexicographic rank of the vertex id; used as the Dijkstra tie-break.
    int id_rank(int v) const { return rank_[v]; }

    double total_mass() const { return total_mass_; }
    VertexSet frontier_vertices() const;

    // Single- and multi-source Dijkstra over the given per-edge costs
    // (defaults to the edge lengths). Ties broken by smallest id rank.
    // Zero-cost edges are permitted.
    struct ShortestPaths {
        std::vector<double> dist;
        std::vector<int> parent_vertex;  // -1 at sources/unreachable
        std::vector<int> parent_edge;
    };
    ShortestPaths dijkstra(const VertexSet& sources,
                           const std::vector<double>* edge_costs = nullptr,
                           const std::vector<bool>* blocked = nullptr) const;
    ShortestPaths dijkstra(int source,
                           const std::vector<double>* edge_costs = nullptr) const;

    // d(x, y) over edge lengths.
    double distance(int x, int y) const;

    // All distances from x0 over edge lengths, cached per source.
    const std::vector<double>& distances_from(int x0) const;

    double diameter_lower_bound() const;  // max over cached/required scans

private:
    std::vector<Vertex> verts_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<int> rank_;
    std::unordered_map<std::string, int> index_;
    double total_mass_ = 0.0;
    mutable std::unordered_map<int, std::vector<double>> dist_cache_;
};

// --- metric balls, volume growth, ends ---

// B(x0, r) = vertices at distance strictly less than r.
VertexSet ball(const MetricMeasureGraph& g, int x0, double r);

// Pairs (r, V(r)) with V(r) the mu-mass of B(x0, r). Radii must be strictly
// increasing and nonempty.
std::vector<std::pair<double, double>> volume_growth(const MetricMeasureGraph& g, int x0,
                                                     const std::vector<double>& radii);

struct EndsDecomposition {
    int base = -1;
    double radius = 0.0;
    std::vector<VertexSet> ends;                // complement components meeting the frontier
    std::vector<VertexSet> bounded_components;  // the rest
};

// Components of the complement of B(x0, r); a component represents an end
// iff it contains a frontier vertex. The ball must be nonempty and proper.
EndsDecomposition detect_ends(const MetricMeasureGraph& g, int x0, double r);

// End counts per radius plus the smallest scanned radius after which the
// count stays constant (reported, not guaranteed beyond the scan).
struct EndsScan {
    std::vector<double> radii;
    std::vector<int> counts;
    double stabilization_radius = 0.0;
};
EndsScan ends_stability_scan(const MetricMeasureGraph& g, int x0,
                             const std::vector<double>& radii);

struct GeometryParams {
    double r0 = 1.0;       // scale the doubling estimate refers to
    double c_d = 1.0;      // doubling estimate, >= 1
    double c_pi = 0.0;     // Poincare constant estimate (lower bound only)
    double lambda = 2.0;   // dilation factor used in the Poincare probe
    double q_lower = 0.0;  // min log-slope of V(r)
    double s_upper = 0.0;  // max log-slope of V(r)
    double beta0 = 0.0;    // 17*log(c_d)/(3*r0)
};

struct GeometryOptions {
    double r0 = 1.0;
    double lambda = 2.0;
    int poincare_trials = 16;
    std::uint64_t seed = 0;
};

// Empirical doubling/mass-exponent/Poincare estimates over the given scales
// and sample vertices. The Poincare constant is a lower bound from random
// test potentials, never a certification.
GeometryParams estimate_geometry(const MetricMeasureGraph& g,
                                 const std::vector<double>& scales,
                                 const VertexSet& sample,
                                 const GeometryOptions& opts = {});

struct ExhaustionSequence {
    std::vector<double> radii;
    std::vector<VertexSet> omegas;       // nested balls
    std::vector<double> gaps;            // Delta_j = dist(Omega_j, complement of Omega_{j+1})
    std::vector<double> shell_measures;  // mu(Omega_{j+1} \ Omega_j)
};

// Nested ball exhaustion; errors when consecutive balls coincide (the gap
// would be undefined), naming the offending index.
ExhaustionSequence annular_exhaustion(const MetricMeasureGraph& g, int x0,
                                      const std::vector<double>& radii);

// Exact distance between two disjoint vertex sets (multi-source Dijkstra).
double set_distance(const MetricMeasureGraph& g, const VertexSet& from, const VertexSet& to);

}  // namespace potlab

#endif
