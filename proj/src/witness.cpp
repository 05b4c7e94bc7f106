#include "potlab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace potlab {

using nlohmann::json;

namespace {

// Candidate ball radii: midpoints between consecutive distinct distance
// values from x0, plus one radius beyond the farthest vertex. ball(x0, cand_k)
// contains exactly the vertices at distance <= d_k.
struct RadiusLadder {
    std::vector<double> candidates;
    std::vector<double> volumes;  // V(cand_k)
};

RadiusLadder radius_ladder(const MetricMeasureGraph& g, int x0) {
    const auto& dist = g.distances_from(x0);
    std::vector<std::pair<double, double>> by_dist;  // (distance, mu)
    for (int v = 0; v < g.vertex_count(); ++v) by_dist.push_back({dist[v], g.vertex(v).mu});
    std::sort(by_dist.begin(), by_dist.end());

    RadiusLadder ladder;
    double cum = 0.0;
    for (std::size_t i = 0; i < by_dist.size();) {
        double d = by_dist[i].first;
        while (i < by_dist.size() && by_dist[i].first == d) cum += by_dist[i++].second;
        double next = i < by_dist.size() ? by_dist[i].first : d + 2.0;
        ladder.candidates.push_back((d + next) / 2.0);
        ladder.volumes.push_back(cum);
    }
    return ladder;
}

double interp_phi(const std::vector<double>& radii, const std::vector<double>& phi, double d) {
    if (d <= radii.front()) return phi.front();
    if (d >= radii.back()) return phi.back();
    auto it = std::upper_bound(radii.begin(), radii.end(), d);
    std::size_t j = static_cast<std::size_t>(it - radii.begin());
    double t = (d - radii[j - 1]) / (radii[j] - radii[j - 1]);
    return phi[j - 1] + t * (phi[j] - phi[j - 1]);
}

}  // namespace

WitnessFunction staircase_witness(const MetricMeasureGraph& g, int x0, double p, double c_d) {
    if (!(p >= 1.0)) throw GraphError("staircase witness needs p >= 1");
    if (!(c_d > 1.0)) throw GraphError("staircase witness needs c_d > 1");
    RadiusLadder ladder = radius_ladder(g, x0);

    std::vector<double> radii{ladder.candidates.front()};
    std::vector<double> volumes{ladder.volumes.front()};
    std::vector<double> overshoots;
    std::size_t cursor = 1;
    while (cursor < ladder.candidates.size()) {
        double target = (c_d + 1.0) * volumes.back();
        while (cursor < ladder.candidates.size() && ladder.volumes[cursor] < target) ++cursor;
        if (cursor >= ladder.candidates.size()) break;
        radii.push_back(ladder.candidates[cursor]);
        volumes.push_back(ladder.volumes[cursor]);
        overshoots.push_back(ladder.volumes[cursor] / target - 1.0);
        ++cursor;
    }
    int stairs = static_cast<int>(radii.size()) - 1;
    if (stairs < 3) throw GraphError("fewer than 3 achievable stairs");

    std::vector<double> phi{0.0};
    for (int i = 1; i <= stairs; ++i)
        phi.push_back(phi.back() + std::pow(volumes[i] - volumes[i - 1], -1.0 / p));

    WitnessFunction f;
    f.kind = "staircase";
    f.p = p;
    f.x0 = x0;
    f.annulus_radii = radii;
    const auto& dist = g.distances_from(x0);
    for (int v = 0; v < g.vertex_count(); ++v) f.values.push_back(interp_phi(radii, phi, dist[v]));

    // Geometric extension of the step sizes with ratio (c_d+1)^{-1/p}.
    double t = std::pow(c_d + 1.0, -1.0 / p);
    double last_step = std::pow(volumes[stairs] - volumes[stairs - 1], -1.0 / p);
    f.has_limit = true;
    f.predicted_limit = phi.back() + last_step * t / (1.0 - t);

    f.parameters = json{{"c_d", c_d},
                        {"mu0", volumes.front()},
                        {"stairs", stairs},
                        {"radii", radii},
                        {"volumes", volumes},
                        {"overshoots", overshoots},
                        {"phi", phi}};
    return f;
}

WitnessFunction ahlfors_witness(double s, double p, double q) {
    if (!(s > 0.0) || !(p >= 1.0) || !(q > 0.0))
        throw GraphError("ahlfors witness needs s > 0, p >= 1, q > 0");
    double lhs = 1.0 / p, rhs = 1.0 / q + 1.0 / s;
    if (lhs == rhs) throw GraphError("ahlfors witness rejects the exponent equality case");
    WitnessFunction f;
    f.kind = lhs < rhs ? "ahlfors_min" : "ahlfors_max";
    f.p = p;
    f.parameters = json{{"s", s}, {"q", q}};
    return f;
}

double ahlfors_value(const WitnessFunction& f, double d) {
    double s = f.parameters.at("s").get<double>();
    double q = f.parameters.at("q").get<double>();
    if (d <= 0.0) return 1.0;
    if (f.kind == "ahlfors_min") return std::min(1.0, std::pow(d, -s / q));
    return std::max(1.0, std::pow(d, s / q));
}

double ahlfors_lip_bound(const WitnessFunction& f, double d) {
    double s = f.parameters.at("s").get<double>();
    double q = f.parameters.at("q").get<double>();
    if (!(d > 0.0)) throw GraphError("lip bound needs d > 0");
    return (s / q) * std::pow(d, -(s + q) / q);
}

PuncturedLogModel punctured_log_witness(double q, double p, int mesh, double log_range) {
    if (!(p >= 1.0)) throw GraphError("punctured log witness needs p >= 1");
    if (q == 0.0 || !(q > -1.0 / p) || !(q < 1.0 - 1.0 / p))
        throw GraphError("q must lie in (-1/p, 1-1/p) and be nonzero");
    if (mesh < 8) throw GraphError("mesh too small");
    if (!(log_range > 0.0)) throw GraphError("log range must be positive");

    const double dt = log_range / mesh;
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    for (int k = 0; k <= mesh; ++k) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "t%06d", k);
        verts.push_back({buf, dt, k == mesh});
        // sigma = len * (unit quasihyperbolic density), so the energy sum
        // discretizes the 1-D integral of |u'|^p dtau.
        if (k > 0) edges.push_back({k - 1, k, dt, dt});
    }

    PuncturedLogModel model{MetricMeasureGraph(std::move(verts), std::move(edges)), {}};
    model.f.kind = "punctured_log";
    model.f.p = p;
    model.f.x0 = 0;
    model.f.parameters = json{{"q", q}, {"mesh", mesh}, {"log_range", log_range}};
    for (int k = 0; k <= mesh; ++k) model.f.values.push_back(std::pow(1.0 + k * dt, q));
    for (int j = 0; j <= 5; ++j) model.f.annulus_radii.push_back(j * log_range / 5.0 + 1e-9);
    model.f.has_limit = false;
    return model;
}

WitnessFunction two_ends_witness(const MetricMeasureGraph& g, const EndsDecomposition& ends,
                                 int chosen_end, double tau) {
    if (ends.ends.size() < 2) throw GraphError("two-ends witness needs at least two ends");
    if (chosen_end < 0 || chosen_end >= static_cast<int>(ends.ends.size()))
        throw GraphError("chosen end out of range");

    std::vector<bool> in_end(g.vertex_count(), false);
    for (int v : ends.ends[chosen_end]) in_end[v] = true;
    VertexSet s_set;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!in_end[v]) s_set.push_back(v);

    auto dist_s = g.dijkstra(s_set).dist;
    double far = 0.0;
    for (double d : dist_s) far = std::max(far, d);
    if (!(far > 0.0)) throw GraphError("chosen end has no interior");
    if (tau <= 0.0) tau = std::max(far / 2.0, 1e-12);

    WitnessFunction f;
    f.kind = "two_ends";
    f.p = 2.0;
    f.x0 = ends.base;
    for (double d : dist_s) f.values.push_back(std::min(1.0, d / tau));

    int collar_edges = 0;
    for (const Edge& e : g.edges())
        if (f.values[e.u] != f.values[e.v]) ++collar_edges;
    f.parameters = json{{"tau", tau}, {"chosen_end", chosen_end}, {"collar_edges", collar_edges}};

    const auto& dist0 = g.distances_from(ends.base);
    double dmax = 0.0;
    for (double d : dist0) dmax = std::max(dmax, d);
    for (int j = 0; j <= 4; ++j)
        f.annulus_radii.push_back(ends.radius + j * (dmax + 1.0 - ends.radius) / 4.0);
    return f;
}

WitnessFunction parabolic_staircase_witness(const MetricMeasureGraph& g, int x0, double p,
                                            int budget, double tol) {
    if (budget < 1) throw GraphError("stair budget must be positive");
    RadiusLadder ladder = radius_ladder(g, x0);
    const int n_cand = static_cast<int>(ladder.candidates.size());

    WitnessFunction f;
    f.kind = "parabolic_staircase";
    f.p = p;
    f.x0 = x0;
    f.values.assign(g.vertex_count(), 0.0);

    json stairs = json::array();
    int r_idx = 0;
    bool any = false;
    for (int k = 1; k <= budget && r_idx < n_cand - 1; ++k) {
        double target = std::pow(2.0, -static_cast<double>(k) * p);
        VertexSet inner = ball(g, x0, ladder.candidates[r_idx]);
        int best_R = -1;
        CapacityResult best;
        Potential warm;
        bool have_warm = false;
        for (int R_idx = r_idx + 1; R_idx < n_cand; ++R_idx) {
            std::vector<bool> in_outer(g.vertex_count(), false);
            for (int v : ball(g, x0, ladder.candidates[R_idx])) in_outer[v] = true;
            VertexSet complement;
            for (int v = 0; v < g.vertex_count(); ++v)
                if (!in_outer[v]) complement.push_back(v);
            if (complement.empty()) break;
            best = capacity(g, inner, complement, p, tol, have_warm ? &warm : nullptr);
            warm = best.minimizer;
            have_warm = true;
            best_R = R_idx;
            if (best.value < target) break;
        }
        if (best_R < 0) break;
        bool achieved = best.value < target;
        stairs.push_back(json{{"k", k},
                              {"r", ladder.candidates[r_idx]},
                              {"R", ladder.candidates[best_R]},
                              {"energy", best.value},
                              {"target", target},
                              {"achieved", achieved}});
        for (int v = 0; v < g.vertex_count(); ++v) f.values[v] += 1.0 - best.minimizer.u[v];
        f.annulus_radii.push_back(ladder.candidates[best_R]);
        any = true;
        if (!achieved) break;

        // Next inner radius: first candidate past R with shell mass >= 1 when
        // possible, otherwise the next candidate.
        int next = best_R + 1;
        for (int j = best_R + 1; j < n_cand; ++j)
            if (ladder.volumes[j] - ladder.volumes[best_R] >= 1.0) {
                next = j;
                break;
            }
        r_idx = next;
    }
    if (!any) throw GraphError("first stair unreachable within the graph");
    if (f.annulus_radii.size() < 2)
        f.annulus_radii.insert(f.annulus_radii.begin(), ladder.candidates.front());
    f.parameters = json{{"stairs", stairs}, {"budget", budget}};
    return f;
}

std::vector<double> default_c_grid(const WitnessFunction& f, int points) {
    if (f.values.empty()) throw GraphError("witness has no sampled values");
    auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
    double range = std::max(*mx - *mn, 1e-12);
    double lo = *mn - range / 4.0, hi = *mx + range / 4.0;
    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
        grid.push_back(lo + (hi - lo) * i / static_cast<double>(points - 1));
    if (f.has_limit) grid.push_back(f.predicted_limit);
    return grid;
}

WitnessReport evaluate_witness(const MetricMeasureGraph& g, const WitnessFunction& f, double p,
                               const std::vector<double>& c_grid, int last_k) {
    if (c_grid.empty()) throw GraphError("empty constant grid");
    WitnessFunction sampled = f;
    if (sampled.values.empty()) {
        if (sampled.kind.rfind("ahlfors", 0) == 0) {
            int x0 = sampled.x0 >= 0 ? sampled.x0 : 0;
            const auto& dist = g.distances_from(x0);
            for (int v = 0; v < g.vertex_count(); ++v)
                sampled.values.push_back(ahlfors_value(sampled, dist[v]));
            sampled.x0 = x0;
        } else {
            throw GraphError("witness has no vertex values");
        }
    }
    if (static_cast<int>(sampled.values.size()) != g.vertex_count())
        throw GraphError("witness values do not match the graph");

    int x0 = sampled.x0 >= 0 ? sampled.x0 : 0;
    const auto& dist = g.distances_from(x0);
    std::vector<double> radii = sampled.annulus_radii;
    if (radii.size() < 2) {
        double dmax = *std::max_element(dist.begin(), dist.end());
        for (int j = 0; j <= 5; ++j) radii.push_back(j * (dmax + 1.0) / 5.0);
    }

    WitnessReport rep;
    rep.annulus_radii = radii;
    rep.last_k = last_k;
    rep.energy = dirichlet_energy(g, Potential{sampled.values}, p);

    const std::size_t n_ann = radii.size() - 1;
    std::vector<std::vector<int>> shells(n_ann);
    for (int v = 0; v < g.vertex_count(); ++v)
        for (std::size_t j = 0; j < n_ann; ++j)
            if (dist[v] >= radii[j] && dist[v] < radii[j + 1]) {
                shells[j].push_back(v);
                break;
            }
    for (std::size_t j = 0; j < n_ann; ++j) {
        double mass = 0.0;
        for (int v : shells[j]) mass += g.vertex(v).mu;
        rep.annulus_masses.push_back(mass);
        // Weighted median of f over the shell: the p = 1 deficit minimizer and
        // a near-minimizer for other p.
        std::vector<std::pair<double, double>> vals;
        for (int v : shells[j]) vals.push_back({sampled.values[v], g.vertex(v).mu});
        std::sort(vals.begin(), vals.end());
        double acc = 0.0, med = vals.empty() ? 0.0 : vals.back().first;
        for (const auto& [val, mu] : vals) {
            acc += mu;
            if (acc >= mass / 2.0) {
                med = val;
                break;
            }
        }
        rep.median_c.push_back(med);
    }

    rep.c_grid = c_grid;
    for (double c : c_grid) {
        std::vector<double> row;
        for (std::size_t j = 0; j < n_ann; ++j) {
            double d = 0.0;
            for (int v : shells[j])
                d += g.vertex(v).mu * std::pow(std::abs(sampled.values[v] - c), p);
            row.push_back(d);
        }
        std::size_t k = std::min<std::size_t>(last_k, row.size());
        double floor = kInf, mean = 0.0;
        for (std::size_t j = row.size() - k; j < row.size(); ++j) floor = std::min(floor, row[j]);
        for (double dj : row) mean += dj;
        mean /= row.empty() ? 1.0 : static_cast<double>(row.size());
        rep.deficits.push_back(std::move(row));
        rep.floors.push_back(std::isfinite(floor) ? floor : 0.0);
        rep.per_stair_mean.push_back(mean);
        rep.verdicts.push_back(rep.floors.back() > 0.0 ? "diverging" : "inconclusive");
    }
    return rep;
}

}  // namespace potlab
