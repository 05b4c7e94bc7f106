#ifndef POTLAB_WITNESS_HPP
#define POTLAB_WITNESS_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "potlab/capacity.hpp"
#include "potlab/graph.hpp"

namespace potlab {

// Explicit candidate separating the Dirichlet class from Newton-Sobolev + constants:
// vertex values plus the bookkeeping needed to evaluate energies and
// per-annulus L^p deficits.
struct WitnessFunction {
    std::string kind;  // staircase | ahlfors_min | ahlfors_max | punctured_log |
                       // two_ends | parabolic_staircase
    double p = 2.0;
    nlohmann::json parameters;         // kind-specific record
    std::vector<double> values;        // per vertex (empty for closed-form kinds)
    bool has_limit = false;
    double predicted_limit = 0.0;
    std::vector<double> annulus_radii;  // breakpoints for shell evaluation
    int x0 = -1;
};

// Radial staircase interpolation: radii r_i picked as the smallest candidate
// radius with V(r_i) >= (c_d + 1) * V(r_{i-1}) (overshoot recorded), values
// phi(d(x0, .)) with phi steps (V_i - V_{i-1})^{-1/p}.
WitnessFunction staircase_witness(const MetricMeasureGraph& g, int x0, double p,
                                  double c_d = 2.0);

// Closed-form evaluator over d(x0, .): min branch f = min{1, d^{-s/q}} when
// 1/p < 1/q + 1/s, max branch f = max{1, d^{s/q}} when 1/p > 1/q + 1/s;
// equality rejected.
WitnessFunction ahlfors_witness(double s, double p, double q);
double ahlfors_value(const WitnessFunction& f, double d);
// Local Lipschitz bound (s/q) * d^{-(s+q)/q} used for energy comparison.
double ahlfors_lip_bound(const WitnessFunction& f, double d);

// 1-D discretization of the punctured-ball example in the log variable
// tau = log(e/|x|) in [1, 1 + log_range]: quasihyperbolic unit speed, uniform
// measure, values tau^q.
struct PuncturedLogModel {
    MetricMeasureGraph graph;
    WitnessFunction f;
};
PuncturedLogModel punctured_log_witness(double q, double p, int mesh, double log_range = 8.0);

// u = min{1, dist(x, S)/tau} with S the complement of the chosen end.
WitnessFunction two_ends_witness(const MetricMeasureGraph& g, const EndsDecomposition& ends,
                                 int chosen_end = 0, double tau = 0.0 /* 0 = auto */);

// Budgeted stair loop: capacity minimizers u_k with energy < 2^{-kp},
// v_k = 1 - u_k, f = sum v_k; stops when the graph cannot reach the target,
// recording achieved energies.
WitnessFunction parabolic_staircase_witness(const MetricMeasureGraph& g, int x0, double p,
                                            int budget, double tol = 1e-9);

struct WitnessReport {
    double energy = 0.0;
    std::vector<double> annulus_radii;
    std::vector<double> annulus_masses;
    std::vector<double> c_grid;
    // deficits[c][j] = integral of |f - c|^p over annulus j.
    std::vector<std::vector<double>> deficits;
    std::vector<double> floors;          // per c: min deficit over the last K annuli
    std::vector<double> per_stair_mean;  // per c: mean deficit over completed annuli
    std::vector<std::string> verdicts;   // per c: "diverging" | "inconclusive"
    std::vector<double> median_c;        // per annulus: weighted median of f (deficit near-minimizer)
    int last_k = 3;
};

// Default grid: 41 points spanning [min f - range/4, max f + range/4] plus
// the predicted limit when present.
std::vector<double> default_c_grid(const WitnessFunction& f, int points = 41);

WitnessReport evaluate_witness(const MetricMeasureGraph& g, const WitnessFunction& f, double p,
                               const std::vector<double>& c_grid, int last_k = 3);

}  // namespace potlab

#endif
