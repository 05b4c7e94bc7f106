#ifndef POTLAB_MODULUS_HPP
#define POTLAB_MODULUS_HPP

#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

// Family of curves connecting a source set to a target set; "escape"
// families target the frontier vertices instead of an explicit set.
struct CurveFamilySpec {
    VertexSet source;
    VertexSet target;
    bool escape = false;
    VertexSet forbidden;
};

struct DensityField {
    std::vector<double> rho;  // per edge, >= 0
};

struct ModulusResult {
    double value = 0.0;
    DensityField rho;
    std::vector<std::vector<int>> active_paths;  // vertex sequences
    double gap = 0.0;                            // 1 - (final shortest rho-length)
    int iterations = 0;
    bool converged = true;
};

// Sum of rho(e)*len(e) along a walk given as a vertex sequence.
double rho_length(const MetricMeasureGraph& g, const DensityField& rho,
                  const std::vector<int>& path);

struct RhoPath {
    std::vector<int> vertices;
    double length = kInf;
};

// Path from S to T minimizing rho-length (Dijkstra, zero costs permitted,
// deterministic tie-break). length stays infinite when T is unreachable.
RhoPath shortest_rho_path(const MetricMeasureGraph& g, const DensityField& rho,
                          const VertexSet& source, const VertexSet& target,
                          const VertexSet& forbidden = {});

// Discrete p-modulus of the connecting family by cutting planes: grow an
// active set of violated paths via the shortest-path separation oracle and
// re-solve the restricted convex program on it after each addition.
// An optional warm start reuses a previous active set (nested families).
ModulusResult modulus_connecting(const MetricMeasureGraph& g, const CurveFamilySpec& family,
                                 double p, double tol, const ModulusResult* warm_start = nullptr);

struct AdmissibilityCheck {
    bool admissible = false;
    std::vector<int> worst_path;
    double worst_length = kInf;
};

// True iff the shortest rho-path of the family has rho-length >= 1 - tol.
AdmissibilityCheck verify_admissible(const MetricMeasureGraph& g, const DensityField& rho,
                                     const CurveFamilySpec& family, double tol);

}  // namespace potlab

#endif
