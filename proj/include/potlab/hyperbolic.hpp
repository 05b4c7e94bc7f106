#pragma once

// Continuum computations on hyperbolic space H^n (n = 2 or 3) in the polar
// model: tensor quadrature grids on (0, R_max] x S^{n-1}, Dirichlet-type
// norms weighted by the Jacobian sinh^{n-1}(r), sphere-average Cauchy and
// lateral estimates, trace diagnostics, the one-dimensional exponential
// Sobolev inequality, and the radial modulus lower bound.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "potlab/graph.hpp"  // GraphError, kInf

namespace potlab::hn {

// Quadrature grid on (0, R_max] x S^{n-1}.
//
// Radial nodes r_i = i * dr for i = 1..M with composite-trapezoid weights
// (the implicit node at r = 0 carries Jacobian sinh^{n-1}(0) = 0 and is
// dropped).  Angular nodes: for n = 2 a uniform circle grid theta_j = j * h;
// for n = 3 a tensor grid of cell-centered colatitudes x longitudes whose
// weights are exact cell integrals of sin(colat), so they sum to 4*pi
// exactly.
struct PolarGrid {
    int n = 2;
    double r_max = 0.0;
    std::vector<double> r;    // radial nodes, size M
    std::vector<double> wr;   // radial weights, size M

    int n_theta = 0;          // total angular node count
    std::vector<double> wtheta;  // angular weights, sum = vol(S^{n-1})

    // n = 2 layout.
    std::vector<double> theta;  // size n_theta

    // n = 3 layout: angular index j = ic * n_lon + il.
    int n_colat = 0;
    int n_lon = 0;
    std::vector<double> colat;  // cell-centered, size n_colat
    std::vector<double> lon;    // size n_lon

    double dr = 0.0;
    double dcolat = 0.0;  // n = 3
    double dlon = 0.0;    // n = 3
    double dtheta = 0.0;  // n = 2

    int radial_count() const { return static_cast<int>(r.size()); }
    double angular_measure() const;  // 2*pi or 4*pi
};

PolarGrid make_polar_grid(int n, double r_max, int radial, int angular);

// Samples of f = u o phi on a PolarGrid together with finite-difference
// derivatives: d_r is the radial derivative, d_s the intrinsic angular
// derivative magnitude on the unit sphere.  Layout: index i * n_theta + j.
struct PolarFunction {
    std::vector<double> values;
    std::vector<double> d_r;
    std::vector<double> d_s;
};

// fn(r, a, b): for n = 2, a = circle angle and b is unused; for n = 3,
// a = colatitude and b = longitude.
PolarFunction sample_polar(const PolarGrid& grid,
                           const std::function<double(double, double, double)>& fn);

struct HyperbolicNorms {
    double mass_p = 0.0;          // int sinh^{n-1}(r) |f|^p
    double radial_energy = 0.0;   // int sinh^{n-1}(r) |d_r f|^p
    double angular_energy = 0.0;  // int sinh^{n-1-p}(r) |d_s f|^p
    double total_energy = 0.0;    // int sinh^{n-1}(r) (|d_r f|^2 + sinh^{-2} |d_s f|^2)^{p/2}
};

// Quadrature restricted to radial indices [i_lo, i_hi] (i_hi = -1 means the
// last node).  Zero angular derivatives contribute zero even where the
// weight sinh^{n-1-p}(r) is astronomically large near r = 0.
HyperbolicNorms hyperbolic_norms(const PolarGrid& grid, const PolarFunction& f, double p,
                                 int i_lo = 0, int i_hi = -1);

// Full |du|^p energy of the band [i_lo, i_hi] x E; E = nullptr means the
// whole sphere.
double shell_energy(const PolarGrid& grid, const PolarFunction& f, double p, int i_lo, int i_hi,
                    const std::vector<int>* E = nullptr);

// Spherical cap: center direction plus angular radius.  For n = 2 the
// center is the circle angle `a` (b unused); for n = 3, a = colatitude and
// b = longitude of the center.
struct Cap {
    double a = 0.0;
    double b = 0.0;
    double radius = 0.0;
};

std::vector<int> cap_indices(const PolarGrid& grid, const Cap& cap);

// Pair of isometric caps; sigma is the angular distance of the centers.
struct CapPair {
    Cap c1;
    Cap c2;
    double sigma = 0.0;
};

CapPair make_cap_pair(const Cap& c1, const Cap& c2);

// Weighted mean of f(r_i, .) over the angular index set E.
double cap_average(const PolarGrid& grid, const PolarFunction& f, const std::vector<int>& E,
                   int radial_index);

// Two-sided evaluation of an average estimate: lhs is the measured average
// difference, rhs = constant * norm_factor * shell_energy^{1/p} / vol^{1/p}.
struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double norm_factor = 0.0;
    double band_energy = 0.0;
    double constant = 1.0;
    bool holds = false;
};

// |u_{E,s} - u_{E,r}| <= vol(E)^{-1/p} ||sinh^{-(n-1)/p}||_{p/(p-1),[r,s]}
//                        * (band energy over [r,s] x E)^{1/p}.
// p = 1 uses the sup form of the dual norm.
BoundCheck cauchy_bound(const PolarGrid& grid, const PolarFunction& f, const std::vector<int>& E,
                        int i_r, int i_s, double p);

// |u_{C1,r} - u_{C2,r}| <= C_p vol(C1)^{-1/p}
//     ||sinh^{1-(n-1)/p}||_{p/(p-1),[r,r+pi/2]} * (band energy, full sphere)^{1/p}
// valid for r > arcsinh(1); C_p = 2 sqrt(2) 2^{(p-1)/p} traced through the
// corridor argument (sqrt(2) speed factor, 2^{p-1} gradient splitting, and
// the final doubling over the two half rotations).
BoundCheck lateral_bound(const PolarGrid& grid, const PolarFunction& f, const CapPair& caps,
                         int i_r, double p);

double lateral_constant(double p);  // 2 sqrt(2) 2^{(p-1)/p}

// Per-cell average sequences along a radius schedule, fitted limits (mean of
// the last K entries), and the spread between cell limits.
struct TraceReport {
    std::vector<std::vector<double>> averages;  // [cell][schedule step]
    std::vector<std::vector<double>> bounds;    // Cauchy bound per consecutive step pair
    std::vector<double> limits;                 // [cell]
    double spread = 0.0;
    bool constant = false;
};

TraceReport trace_report(const PolarGrid& grid, const PolarFunction& f,
                         const std::vector<std::vector<int>>& cells,
                         const std::vector<int>& schedule, double p, int last_k = 5,
                         double tol = 1e-2);

// Partition of the sphere into k angular bands (arcs for n = 2, colatitude
// bands for n = 3), returned as angular index sets.
std::vector<std::vector<int>> band_partition(const PolarGrid& grid, int k);

// Fitted limit of f along individual rays r -> f(r, theta_j), with a
// per-ray Cauchy flag (successive last-K differences below tol).
struct RayLimits {
    std::vector<double> limits;
    std::vector<bool> cauchy;
    bool common_limit = false;
    double spread = 0.0;
};

RayLimits limit_along_rays(const PolarGrid& grid, const PolarFunction& f,
                           const std::vector<int>& theta_indices, const std::vector<int>& schedule,
                           int last_k = 5, double tol = 1e-2);

// One-dimensional exponential-weight Sobolev inequality
//   int |f|^p e^{kt} dt <= (p/k)^p int |f'|^p e^{kt} dt
// for compactly supported piecewise-linear f, both sides by exact piecewise
// integrals (integer p) or high-order quadrature otherwise.
struct SobolevCheck {
    double kappa = 0.0;
    double p = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;           // the raw gradient integral
    double rhs_weighted = 0.0;  // (p/kappa)^p * rhs
    bool pass = false;
};

SobolevCheck one_dim_sobolev_check(const std::vector<double>& t, const std::vector<double>& f,
                                   double kappa, double p);

// Closed-form lower bound for the p-modulus of the curve family leaving the
// rho-sphere cap of boundary measure `cap_measure`:
//   2^n rho^{n-1} measure / (C_{n,p}^x (1-rho)^{n-1}),
// reported for both exponent conventions x = p (derivation step) and x = n
// (final display); the two disagree in the source and neither is asserted
// over the other.
struct RadialModulusBound {
    double c_np = 1.0;
    double bound_power_p = 0.0;
    double bound_power_n = 0.0;
};

RadialModulusBound radial_modulus_lower_bound(double cap_measure, double rho, int n, double p);

// Smoothed product witness f(r, theta) = eta(r) psi(theta): eta ramps 0 -> 1
// over [1/2, 1], psi = (1 + cos(angle to the north pole)) / 2.  Finite
// p-energy for p > n-1 with a non-constant boundary trace.
PolarFunction cap_witness(const PolarGrid& grid);

// Quadrature of |f - c|^p over the truncation [0, R] x S^{n-1}.
double truncated_deviation(const PolarGrid& grid, const PolarFunction& f, double p, double c,
                           double R);

// Desk-scale check of the dichotomy "D^{1,p} = N^{1,p} + R iff p <= n-1":
// p > n-1 exercises the cap witness (finite energy, non-constant trace,
// unbounded |u - c|^p truncations); p <= n-1 runs the lateral estimate and
// trace constancy over a suite of decaying test functions.
struct ClassificationRecord {
    int n = 0;
    double p = 0.0;
    std::string side;  // "strict_inclusion" | "equality_consistent"
    bool consistent = false;
    nlohmann::json details;
};

ClassificationRecord hn_classification_harness(int n, double p, double r_max, int radial,
                                               int angular);

}  // namespace potlab::hn
