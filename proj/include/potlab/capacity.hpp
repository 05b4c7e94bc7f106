#ifndef POTLAB_CAPACITY_HPP
#define POTLAB_CAPACITY_HPP

#include <string>
#include <vector>

#include "potlab/graph.hpp"
#include "potlab/modulus.hpp"

namespace potlab {

struct Potential {
    std::vector<double> u;  // per vertex
};

// |u(x)-u(y)| / len(e) per edge.
std::vector<double> edge_gradient(const MetricMeasureGraph& g, const Potential& u);

// sum_e sigma(e) * gradient(e)^p.
double dirichlet_energy(const MetricMeasureGraph& g, const Potential& u, double p);

struct CapacityResult {
    double value = 0.0;
    Potential minimizer;
    double residual = 0.0;
    int iterations = 0;
    bool converged = true;
};

// Minimize the p-Dirichlet energy subject to u = 1 on E and u = 0 on F.
// p = 2 is solved exactly through the weighted graph Laplacian; other p by
// cyclic coordinate minimization, warm-started from the p = 2 solution.
// Minimizer values lie in [0,1].
Potential dirichlet_minimize(const MetricMeasureGraph& g, const VertexSet& ones,
                             const VertexSet& zeros, double p, double tol,
                             const Potential* warm_start = nullptr);

CapacityResult capacity(const MetricMeasureGraph& g, const VertexSet& ones,
                        const VertexSet& zeros, double p, double tol,
                        const Potential* warm_start = nullptr);

struct CapModComparison {
    double cap = 0.0;
    double mod = 0.0;
    double relative_difference = 0.0;
};

// Capacity of the condenser (B(x0,r), complement of B(x0,R)) against the
// modulus of the connecting family on the same condenser; difference is
// reported, not asserted.
CapModComparison check_cap_eq_mod(const MetricMeasureGraph& g, int x0, double r, double R,
                                  double p, double tol);

struct ClassificationThresholds {
    double divergence_sum = 10.0;    // shell/volume sum above this => parabolic
    double capacity_floor_factor = 1e-3;  // floor = factor * first capacity value
    double plateau_rel = 0.05;       // relative decrease over the last 3 samples
};

struct ClassificationReport {
    std::string verdict;  // "parabolic" | "hyperbolic" | "inconclusive"
    std::vector<double> radii;
    std::vector<double> capacities;
    std::vector<double> volume_partial_sums;
    std::vector<double> shell_partial_sums;
    ClassificationThresholds thresholds;
    double capacity_floor = 0.0;
    bool schedule_exhausted = false;
};

// Parabolic/hyperbolic classification at desk scale: capacity sequence over
// the radii schedule, the volume integral test as a quadrature sum, and the
// annular shell sums. Finite truncations cannot witness limits, so verdicts
// are heuristic with all evidence reported. A convergent volume test alone
// never yields "hyperbolic".
ClassificationReport classify_parabolic(const MetricMeasureGraph& g, int x0, double p,
                                        double inner_radius, const std::vector<double>& schedule,
                                        const ClassificationThresholds& thresholds = {},
                                        double tol = 1e-8);

}  // namespace potlab

#endif
