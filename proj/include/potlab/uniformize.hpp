#ifndef POTLAB_UNIFORMIZE_HPP
#define POTLAB_UNIFORMIZE_HPP

#include <cstdint>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

struct HyperbolicityReport {
    double delta = 0.0;            // four-point constant (not the thin-triangle delta)
    long long quadruples = 0;      // evaluated quadruples
    bool exhaustive = false;
    double coverage = 0.0;         // evaluated / total
};

// Four-point hyperbolicity estimate: over quadruples, half the difference of
// the two largest of the three pairing sums. Exhaustive when |V|^4 fits the
// budget, otherwise seeded uniform sampling with reported coverage.
HyperbolicityReport gromov_delta(const MetricMeasureGraph& g, long long quadruple_budget,
                                 std::uint64_t seed = 0);

// Rough-starlikeness estimate: rays = shortest paths from z0 to each frontier
// vertex; returns the max distance of any vertex to the union of these rays.
double rough_starlike_constant(const MetricMeasureGraph& g, int z0);

struct UniformizationParams {
    int z0 = 0;
    double eps = 1.0;
    double beta = 1.0;
};

struct UniformizedGraph {
    const MetricMeasureGraph* base = nullptr;
    UniformizationParams params;
    std::vector<double> w_eps;    // per edge: exact integral of e^{-eps t} along the edge
    std::vector<double> mu_beta;  // per vertex
    std::vector<double> rho_eps;  // per vertex

    // Uniformized distances (shortest paths over w_eps).
    std::vector<double> distances_from(const VertexSet& sources) const;
    double distance(int x, int y) const;
};

UniformizedGraph uniformized_graph(const MetricMeasureGraph& g,
                                   const UniformizationParams& params);

// min over frontier vertices of d_eps(v, frontier).
double boundary_distance(const UniformizedGraph& ug, int v);

struct ComparisonEstimates {
    double k1 = 1.0;
    std::vector<int> sample;
    std::vector<double> ratios;  // dist_eps(v, frontier) / rho_eps(v) per sampled vertex
};

// Empirical K1 over the sample: max of ratio and 1/ratio, frontier vertices
// skipped (their boundary distance is 0).
ComparisonEstimates comparison_constants(const UniformizedGraph& ug, const VertexSet& sample);

// Single-linkage clustering of frontier vertices under d_eps at threshold eta.
std::vector<VertexSet> boundary_clusters(const UniformizedGraph& ug, double eta);

}  // namespace potlab

#endif
