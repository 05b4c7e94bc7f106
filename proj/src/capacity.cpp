#include "potlab/capacity.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <set>

namespace potlab {

std::vector<double> edge_gradient(const MetricMeasureGraph& g, const Potential& u) {
    std::vector<double> grad(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        grad[e] = std::abs(u.u[ed.u] - u.u[ed.v]) / ed.len;
    }
    return grad;
}

double dirichlet_energy(const MetricMeasureGraph& g, const Potential& u, double p) {
    double energy = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        double grad = std::abs(u.u[ed.u] - u.u[ed.v]) / ed.len;
        energy += ed.sigma * std::pow(grad, p);
    }
    return energy;
}

namespace {

void validate_condenser(const VertexSet& ones, const VertexSet& zeros) {
    if (ones.empty()) throw GraphError("empty boundary set E");
    if (zeros.empty()) throw GraphError("empty boundary set F");
    std::set<int> s(ones.begin(), ones.end());
    for (int v : zeros)
        if (s.count(v)) throw GraphError("overlapping boundary sets");
}

Potential solve_p2(const MetricMeasureGraph& g, const std::vector<int>& role) {
    // role: 1 on E, 0 on F, -1 free. Weighted Laplacian system on the free
    // vertices with conductances sigma/len^2.
    const int n = g.vertex_count();
    std::vector<int> free_index(n, -1);
    int nf = 0;
    for (int v = 0; v < n; ++v)
        if (role[v] < 0) free_index[v] = nf++;

    Potential u;
    u.u.assign(n, 0.0);
    for (int v = 0; v < n; ++v)
        if (role[v] == 1) u.u[v] = 1.0;
    if (nf == 0) return u;

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    std::vector<double> diag(nf, 0.0);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        double w = ed.sigma / (ed.len * ed.len);
        int a = ed.u, b = ed.v;
        bool fa = role[a] < 0, fb = role[b] < 0;
        if (fa) diag[free_index[a]] += w;
        if (fb) diag[free_index[b]] += w;
        if (fa && fb) {
            trips.emplace_back(free_index[a], free_index[b], -w);
            trips.emplace_back(free_index[b], free_index[a], -w);
        } else if (fa) {
            rhs[free_index[a]] += w * u.u[b];
        } else if (fb) {
            rhs[free_index[b]] += w * u.u[a];
        }
    }
    for (int i = 0; i < nf; ++i) trips.emplace_back(i, i, diag[i]);

    Eigen::SparseMatrix<double> L(nf, nf);
    L.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
    if (solver.info() != Eigen::Success) throw GraphError("Laplacian factorization failed");
    Eigen::VectorXd x = solver.solve(rhs);
    for (int v = 0; v < n; ++v)
        if (role[v] < 0) u.u[v] = x[free_index[v]];
    return u;
}

// 1-D minimizer of sum_e c_e |x - a_e|^p over x for p > 1 (bisection on the
// monotone derivative) and p = 1 (weighted median).
double coordinate_min(const std::vector<double>& vals, const std::vector<double>& coeffs,
                      double p) {
    double lo = vals[0], hi = vals[0];
    for (double a : vals) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (lo == hi) return lo;
    if (p <= 1.0) {
        // weighted median
        std::vector<std::size_t> order(vals.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        double total = 0.0;
        for (double c : coeffs) total += c;
        double acc = 0.0;
        for (std::size_t i : order) {
            acc += coeffs[i];
            if (acc >= total / 2.0) return vals[i];
        }
        return vals[order.back()];
    }
    auto deriv = [&](double x) {
        double d = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double t = x - vals[i];
            d += coeffs[i] * p * std::copysign(std::pow(std::abs(t), p - 1.0), t);
        }
        return d;
    };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (deriv(mid) < 0.0 ? lo : hi) = mid;
        if (hi - lo < 1e-16 * (1.0 + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

double stationarity_residual(const MetricMeasureGraph& g, const std::vector<int>& role,
                             const std::vector<double>& u, double p) {
    double worst = 0.0;
    std::vector<double> partial(g.vertex_count(), 0.0);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        double t = u[ed.u] - u[ed.v];
        double d = ed.sigma * p * std::copysign(std::pow(std::abs(t) / ed.len, p - 1.0), t) / ed.len;
        partial[ed.u] += d;
        partial[ed.v] -= d;
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (role[v] < 0) worst = std::max(worst, std::abs(partial[v]));
    return worst;
}

}  // namespace

Potential dirichlet_minimize(const MetricMeasureGraph& g, const VertexSet& ones,
                             const VertexSet& zeros, double p, double tol,
                             const Potential* warm_start) {
    validate_condenser(ones, zeros);
    if (p < 1.0) throw GraphError("dirichlet_minimize requires p >= 1");
    const int n = g.vertex_count();
    std::vector<int> role(n, -1);
    for (int v : ones) role[v] = 1;
    for (int v : zeros) role[v] = 0;

    Potential u = solve_p2(g, role);
    if (p == 2.0) {
        // The linear solve is already exact; a warm start cannot improve it.
        for (double& x : u.u) x = std::clamp(x, 0.0, 1.0);
        return u;
    }
    if (warm_start && static_cast<int>(warm_start->u.size()) == n) {
        // A previous minimizer of a nested condenser is feasible here and
        // usually closer than the p=2 seed.
        u = *warm_start;
        for (int v : ones) u.u[v] = 1.0;
        for (int v : zeros) u.u[v] = 0.0;
    }
    for (double& x : u.u) x = std::clamp(x, 0.0, 1.0);
    if (p == 2.0 && !warm_start) return u;

    const int max_sweeps = 200000;
    std::vector<double> vals, coeffs;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_move = 0.0;
        for (int v = 0; v < n; ++v) {
            if (role[v] >= 0) continue;
            vals.clear();
            coeffs.clear();
            for (const auto& [w, e] : g.neighbors(v)) {
                const Edge& ed = g.edge(e);
                vals.push_back(u.u[w]);
                coeffs.push_back(ed.sigma / std::pow(ed.len, p));
            }
            double next = std::clamp(coordinate_min(vals, coeffs, p), 0.0, 1.0);
            max_move = std::max(max_move, std::abs(next - u.u[v]));
            u.u[v] = next;
        }
        if (max_move < tol * 1e-3) break;
        if (sweep % 32 == 31 && p > 1.0 &&
            stationarity_residual(g, role, u.u, p) < tol)
            break;
    }
    return u;
}

CapacityResult capacity(const MetricMeasureGraph& g, const VertexSet& ones,
                        const VertexSet& zeros, double p, double tol,
                        const Potential* warm_start) {
    CapacityResult res;
    res.minimizer = dirichlet_minimize(g, ones, zeros, p, tol, warm_start);
    res.value = dirichlet_energy(g, res.minimizer, p);
    std::vector<int> role(g.vertex_count(), -1);
    for (int v : ones) role[v] = 1;
    for (int v : zeros) role[v] = 0;
    res.residual = p > 1.0 ? stationarity_residual(g, role, res.minimizer.u, p) : 0.0;
    return res;
}

CapModComparison check_cap_eq_mod(const MetricMeasureGraph& g, int x0, double r, double R,
                                  double p, double tol) {
    if (!(0.0 < r && r < R)) throw GraphError("check_cap_eq_mod requires 0 < r < R");
    VertexSet inner = ball(g, x0, r);
    VertexSet outer_ball = ball(g, x0, R);
    std::vector<bool> in_outer(g.vertex_count(), false);
    for (int v : outer_ball) in_outer[v] = true;
    VertexSet complement;
    for (int i = 0; i < g.vertex_count(); ++i)
        if (!in_outer[i]) complement.push_back(i);
    if (inner.empty() || complement.empty())
        throw GraphError("condenser is degenerate for the given radii");

    CapModComparison out;
    out.cap = capacity(g, inner, complement, p, tol).value;
    CurveFamilySpec family;
    family.source = inner;
    family.target = complement;
    out.mod = modulus_connecting(g, family, p, tol).value;
    double denom = std::max({std::abs(out.cap), std::abs(out.mod), 1e-300});
    out.relative_difference = std::abs(out.cap - out.mod) / denom;
    return out;
}

ClassificationReport classify_parabolic(const MetricMeasureGraph& g, int x0, double p,
                                        double inner_radius, const std::vector<double>& schedule,
                                        const ClassificationThresholds& thresholds, double tol) {
    if (!(p >= 1.0)) throw GraphError("classify_parabolic requires p >= 1");
    ClassificationReport rep;
    rep.thresholds = thresholds;

    VertexSet inner = ball(g, x0, inner_radius);
    if (inner.empty()) throw GraphError("inner ball is empty");

    // (a) capacity sequence over the schedule, warm-started.
    Potential warm;
    bool have_warm = false;
    for (double R : schedule) {
        if (!(R > inner_radius)) continue;
        VertexSet outer_ball = ball(g, x0, R);
        std::vector<bool> in_outer(g.vertex_count(), false);
        for (int v : outer_ball) in_outer[v] = true;
        VertexSet complement;
        for (int i = 0; i < g.vertex_count(); ++i)
            if (!in_outer[i]) complement.push_back(i);
        if (complement.empty()) {
            rep.schedule_exhausted = true;
            break;
        }
        CapacityResult cap = capacity(g, inner, complement, p, tol, have_warm ? &warm : nullptr);
        warm = cap.minimizer;
        have_warm = true;
        rep.radii.push_back(R);
        rep.capacities.push_back(cap.value);
    }

    // (b) quadrature of the volume integral test, (c) the annular shell sums;
    // both need the 1/(p-1) exponent, so p = 1 uses capacities only.
    if (p > 1.0) {
        const double inv = 1.0 / (p - 1.0);
        double sum = 0.0, prev_r = inner_radius;
        auto growth = volume_growth(g, x0, rep.radii.empty() ? schedule : rep.radii);
        for (auto [r, V] : growth) {
            if (V > 0.0) sum += std::pow(r / V, inv) * (r - prev_r);
            prev_r = r;
            rep.volume_partial_sums.push_back(sum);
        }
        std::vector<double> exhaust_radii;
        exhaust_radii.push_back(inner_radius);
        for (double R : rep.radii) exhaust_radii.push_back(R);
        if (exhaust_radii.size() >= 2) {
            ExhaustionSequence seq = annular_exhaustion(g, x0, exhaust_radii);
            double ssum = 0.0;
            for (std::size_t j = 0; j < seq.gaps.size(); ++j) {
                if (seq.shell_measures[j] > 0.0 && std::isfinite(seq.gaps[j]))
                    ssum += std::pow(std::pow(seq.gaps[j], p) / seq.shell_measures[j], inv);
                rep.shell_partial_sums.push_back(ssum);
            }
        }
    }

    if (rep.capacities.size() < 3) {
        rep.schedule_exhausted = true;
        rep.verdict = "inconclusive";
        return rep;
    }

    rep.capacity_floor = thresholds.capacity_floor_factor * rep.capacities.front();
    double last = rep.capacities.back();
    bool sums_diverge =
        (!rep.shell_partial_sums.empty() && rep.shell_partial_sums.back() > thresholds.divergence_sum) ||
        (!rep.volume_partial_sums.empty() && rep.volume_partial_sums.back() > thresholds.divergence_sum);
    bool capacity_decayed = last < rep.capacity_floor;

    std::size_t k = rep.capacities.size();
    double three_back = rep.capacities[k - 3];
    double rel_decrease = three_back > 0.0 ? (three_back - last) / three_back : 0.0;
    bool plateau = last >= rep.capacity_floor && rel_decrease <= thresholds.plateau_rel;

    bool parabolic_evidence = sums_diverge || capacity_decayed;
    // A convergent volume test alone is never evidence of hyperbolicity.
    if (parabolic_evidence && plateau)
        rep.verdict = "inconclusive";
    else if (parabolic_evidence)
        rep.verdict = "parabolic";
    else if (plateau)
        rep.verdict = "hyperbolic";
    else
        rep.verdict = "inconclusive";
    return rep;
}

}  // namespace potlab
