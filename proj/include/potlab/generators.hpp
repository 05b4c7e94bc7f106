#ifndef POTLAB_GENERATORS_HPP
#define POTLAB_GENERATORS_HPP

#include <json.hpp>
#include <string>

#include "potlab/graph.hpp"

namespace potlab {

// Deterministic graph generators, selected by kind:
//   path                   {count, frontier: "last"|"both"|"none"}
//   cycle                  {count}
//   grid                   {rows, cols, boundary_frontier}
//   tree                   {branching, depth, leaves_frontier}
//   hyperbolic_disk_graph  {n (=2), R, M, N}
//   exact_growth_staircase {C_d, stairs, mu0}
// Vertex ids are zero-padded so that lexicographic order matches construction
// order.
MetricMeasureGraph generate_graph(const std::string& kind, const nlohmann::json& params);

// Seeded random connected graph for property tests: a random spanning tree
// plus extra edges, with lengths/measures in [0.5, 2].
MetricMeasureGraph random_connected_graph(int n_vertices, int extra_edges, std::uint64_t seed);

}  // namespace potlab

#endif
