#include "potlab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace potlab {

namespace {

VertexSet resolve_target(const MetricMeasureGraph& g, const CurveFamilySpec& family) {
    if (family.escape) return g.frontier_vertices();
    return family.target;
}

void validate_family(const MetricMeasureGraph& g, const CurveFamilySpec& family,
                     const VertexSet& target) {
    if (family.source.empty()) throw GraphError("empty source set");
    if (target.empty())
        throw GraphError(family.escape ? "escape family but no frontier vertices"
                                       : "empty target set");
    std::set<int> s(family.source.begin(), family.source.end());
    for (int v : target)
        if (s.count(v)) throw GraphError("source and target sets intersect");
}

// Restricted problem on the active path set:
//   min sum_e sigma_e rho_e^p   s.t.  sum_{e in path_i} len_e rho_e >= 1.
// Solved on the dual: rho_e(lambda) = ((A^T lambda)_e / (p sigma_e))^{1/(p-1)},
// with cyclic 1-D exact maximization over each multiplier (projected at 0).
class RestrictedSolver {
public:
    RestrictedSolver(const MetricMeasureGraph& g, double p) : g_(g), p_(p) {
        // p = 1 is a linear program; the dual update below needs p > 1, so the
        // restricted solve runs on a slightly smoothed exponent (best-effort,
        // value continuous in p on these finite instances).
        if (p_ < 1.0 + 1e-9) p_ = 1.0 + 1e-6;
        weight_.assign(g.edge_count(), 0.0);
        rho_.assign(g.edge_count(), 0.0);
    }

    void add_path(const std::vector<int>& edge_list, double lambda0 = 0.0) {
        paths_.push_back(edge_list);
        lambda_.push_back(lambda0);
        if (lambda0 != 0.0)
            for (int e : edge_list) weight_[e] += lambda0 * g_.edge(e).len;
        refresh_rho(edge_list);
    }

    // Sweeps until every active constraint is satisfied within inner_tol and
    // complementary slackness holds (no positive multiplier on a slack
    // constraint) to the same tolerance.
    bool solve(double inner_tol, int max_sweeps = 50000) {
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            for (std::size_t i = 0; i < paths_.size(); ++i) update_multiplier(i);
            double worst = 0.0;
            for (std::size_t i = 0; i < paths_.size(); ++i) {
                double len = path_rho_length(paths_[i]);
                worst = std::max(worst, 1.0 - len);
                if (lambda_[i] > inner_tol) worst = std::max(worst, len - 1.0);
            }
            if (worst < inner_tol) return true;
        }
        return false;
    }

    const std::vector<double>& rho() const { return rho_; }

    double energy() const {
        double e = 0.0;
        for (int k = 0; k < g_.edge_count(); ++k)
            e += g_.edge(k).sigma * std::pow(rho_[k], p_);
        return e;
    }

    const std::vector<double>& multipliers() const { return lambda_; }

private:
    double path_rho_length(const std::vector<int>& edge_list) const {
        double s = 0.0;
        for (int e : edge_list) s += rho_[e] * g_.edge(e).len;
        return s;
    }

    void refresh_rho(const std::vector<int>& edge_list) {
        const double inv = 1.0 / (p_ - 1.0);
        for (int e : edge_list)
            rho_[e] = weight_[e] > 0.0 ? std::pow(weight_[e] / (p_ * g_.edge(e).sigma), inv) : 0.0;
    }

    // Exact 1-D maximization of the dual over lambda_i >= 0: the constraint
    // response is strictly increasing in lambda_i, so bisection suffices.
    void update_multiplier(std::size_t i) {
        const std::vector<int>& path = paths_[i];
        double cur = path_rho_length(path);
        if (lambda_[i] == 0.0 && cur >= 1.0) return;

        auto with_lambda = [&](double lam) {
            double delta = lam - lambda_[i];
            const double inv = 1.0 / (p_ - 1.0);
            double s = 0.0;
            for (int e : path) {
                double w = weight_[e] + delta * g_.edge(e).len;
                double r = w > 0.0 ? std::pow(w / (p_ * g_.edge(e).sigma), inv) : 0.0;
                s += r * g_.edge(e).len;
            }
            return s;
        };

        double lo = 0.0, hi = std::max(lambda_[i], 1.0);
        if (with_lambda(0.0) >= 1.0) {
            set_lambda(i, 0.0);
            return;
        }
        int guard = 0;
        while (with_lambda(hi) < 1.0 && guard++ < 200) hi *= 2.0;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (with_lambda(mid) < 1.0 ? lo : hi) = mid;
        }
        set_lambda(i, hi);
    }

    void set_lambda(std::size_t i, double lam) {
        double delta = lam - lambda_[i];
        if (delta != 0.0)
            for (int e : paths_[i]) weight_[e] += delta * g_.edge(e).len;
        lambda_[i] = lam;
        refresh_rho(paths_[i]);
    }

    const MetricMeasureGraph& g_;
    double p_;
    std::vector<std::vector<int>> paths_;  // edge lists
    std::vector<double> lambda_;
    std::vector<double> weight_;  // (A^T lambda)_e
    std::vector<double> rho_;
};

std::vector<int> path_edges(const MetricMeasureGraph& g, const std::vector<int>& vertices) {
    std::vector<int> edges;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        auto e = g.find_edge(vertices[i], vertices[i + 1]);
        if (!e) throw GraphError("path uses a nonexistent edge");
        edges.push_back(*e);
    }
    return edges;
}

}  // namespace

double rho_length(const MetricMeasureGraph& g, const DensityField& rho,
                  const std::vector<int>& path) {
    double s = 0.0;
    for (int e : path_edges(g, path)) s += rho.rho[e] * g.edge(e).len;
    return s;
}

RhoPath shortest_rho_path(const MetricMeasureGraph& g, const DensityField& rho,
                          const VertexSet& source, const VertexSet& target,
                          const VertexSet& forbidden) {
    std::vector<double> costs(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) costs[e] = rho.rho[e] * g.edge(e).len;
    std::vector<bool> blocked(g.vertex_count(), false);
    for (int v : forbidden) blocked[v] = true;

    auto sp = g.dijkstra(source, &costs, &blocked);
    RhoPath out;
    int best = -1;
    for (int t : target) {
        if (sp.dist[t] < out.length ||
            (best >= 0 && sp.dist[t] == out.length && g.id_rank(t) < g.id_rank(best))) {
            out.length = sp.dist[t];
            best = t;
        }
    }
    if (best < 0 || !std::isfinite(out.length)) return out;
    for (int v = best; v >= 0; v = sp.parent_vertex[v]) out.vertices.push_back(v);
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
}

ModulusResult modulus_connecting(const MetricMeasureGraph& g, const CurveFamilySpec& family,
                                 double p, double tol, const ModulusResult* warm_start) {
    if (p < 1.0) throw GraphError("modulus requires p >= 1");
    if (!(tol > 0.0)) throw GraphError("modulus requires tol > 0");
    VertexSet target = resolve_target(g, family);
    validate_family(g, family, target);

    ModulusResult res;
    res.rho.rho.assign(g.edge_count(), 0.0);

    RestrictedSolver solver(g, p);
    const double inner_tol = tol / 10.0;
    if (warm_start) {
        for (const auto& pv : warm_start->active_paths) {
            solver.add_path(path_edges(g, pv));
            res.active_paths.push_back(pv);
        }
        solver.solve(inner_tol);
    }

    // Only simple paths are ever added (Dijkstra output), and each added path
    // is violated at addition, so the loop is finite.
    const int max_iter = 200 + 4 * g.edge_count() * g.edge_count();
    DensityField rho_field;
    for (int iter = 0;; ++iter) {
        rho_field.rho = solver.rho();
        RhoPath sp = shortest_rho_path(g, rho_field, family.source, target, family.forbidden);
        if (!std::isfinite(sp.length)) {
            // Target unreachable: the family is empty, modulus 0.
            if (iter == 0 && res.active_paths.empty()) {
                res.value = 0.0;
                res.gap = 0.0;
                res.iterations = 0;
                return res;
            }
            throw GraphError("target became unreachable during modulus solve");
        }
        res.iterations = iter;
        res.gap = 1.0 - sp.length;
        if (sp.length >= 1.0 - tol) break;
        if (iter >= max_iter) {
            res.converged = false;
            break;
        }
        res.active_paths.push_back(sp.vertices);
        solver.add_path(path_edges(g, sp.vertices));
        if (!solver.solve(inner_tol)) res.converged = false;
    }
    res.rho.rho = solver.rho();
    res.value = solver.energy();
    return res;
}

AdmissibilityCheck verify_admissible(const MetricMeasureGraph& g, const DensityField& rho,
                                     const CurveFamilySpec& family, double tol) {
    VertexSet target = resolve_target(g, family);
    validate_family(g, family, target);
    RhoPath sp = shortest_rho_path(g, rho, family.source, target, family.forbidden);
    AdmissibilityCheck out;
    out.worst_length = sp.length;
    if (!std::isfinite(sp.length)) {
        out.admissible = true;  // empty family
        return out;
    }
    out.admissible = sp.length >= 1.0 - tol;
    if (!out.admissible) out.worst_path = sp.vertices;
    return out;
}

}  // namespace potlab
