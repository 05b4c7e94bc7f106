#include "potlab/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include "potlab/capacity.hpp"
#include "potlab/generators.hpp"
#include "potlab/hyperbolic.hpp"
#include "potlab/io.hpp"
#include "potlab/modulus.hpp"
#include "potlab/uniformize.hpp"
#include "potlab/witness.hpp"

namespace potlab {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

const json& require(const json& params, const char* key) {
    auto it = params.find(key);
    if (it == params.end()) throw GraphError(std::string("missing parameter \"") + key + "\"");
    return *it;
}

VertexSet id_set(const MetricMeasureGraph& g, const json& spec) {
    VertexSet out;
    if (spec.is_string()) {
        out.push_back(g.require_vertex(spec.get<std::string>()));
    } else if (spec.is_array()) {
        for (const auto& id : spec) out.push_back(g.require_vertex(id.get<std::string>()));
    } else {
        throw GraphError("vertex set must be an id or an array of ids");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw GraphError("empty vertex set");
    return out;
}

json id_list(const MetricMeasureGraph& g, const VertexSet& set) {
    json out = json::array();
    for (int v : set) out.push_back(g.vertex(v).id);
    return out;
}

MetricMeasureGraph load_graph(const json& params) {
    if (params.contains("graph")) return graph_from_json(params.at("graph"));
    if (params.contains("graph_file"))
        return graph_from_file(params.at("graph_file").get<std::string>());
    throw GraphError("missing parameter \"graph\" (inline document) or \"graph_file\" (path)");
}

json meta_block(const std::string& command, const json& params) {
    json shown = params;
    if (shown.contains("graph")) {
        const json& g = shown.at("graph");
        shown["graph"] = {{"vertices", g.value("vertices", json::array()).size()},
                          {"edges", g.value("edges", json::array()).size()},
                          {"inline", true}};
    }
    return {{"version", kVersion},
            {"command", command},
            {"seed", params.value("seed", std::uint64_t{0})},
            {"parameters", shown}};
}

json edge_series(const MetricMeasureGraph& g, const std::vector<double>& per_edge,
                 const char* field) {
    json out = json::array();
    for (int e = 0; e < g.edge_count(); ++e)
        out.push_back({{"u", g.vertex(g.edge(e).u).id},
                       {"v", g.vertex(g.edge(e).v).id},
                       {field, per_edge[e]}});
    return out;
}

json vertex_series(const MetricMeasureGraph& g, const std::vector<double>& per_vertex,
                   const char* field) {
    json out = json::array();
    for (int v = 0; v < g.vertex_count(); ++v)
        out.push_back({{"id", g.vertex(v).id}, {field, per_vertex[v]}});
    return out;
}

// ---- individual commands ----------------------------------------------

int cmd_generate(const json& params, json& results) {
    std::string kind = require(params, "kind").get<std::string>();
    json args = params.value("params", json::object());
    MetricMeasureGraph g =
        kind == "random"
            ? random_connected_graph(args.value("vertices", 20), args.value("extra_edges", 8),
                                     params.value("seed", std::uint64_t{0}))
            : generate_graph(kind, args);
    results["graph"] = graph_to_json(g);
    results["vertices"] = g.vertex_count();
    results["edges"] = g.edge_count();
    return 0;
}

int cmd_modulus(const MetricMeasureGraph& g, const json& params, json& results) {
    CurveFamilySpec family;
    family.escape = params.value("escape", false);
    family.source = id_set(g, require(params, "source"));
    if (!family.escape) family.target = id_set(g, require(params, "target"));
    if (params.contains("forbidden")) family.forbidden = id_set(g, params.at("forbidden"));
    double p = params.value("p", 2.0);
    double tol = params.value("tol", 1e-8);
    auto res = modulus_connecting(g, family, p, tol);
    results = {{"value", res.value},
               {"gap", res.gap},
               {"iterations", res.iterations},
               {"converged", res.converged},
               {"active_paths", res.active_paths.size()},
               {"tol", tol},
               {"rho", edge_series(g, res.rho.rho, "rho")}};
    return res.converged ? 0 : 2;
}

int cmd_capacity(const MetricMeasureGraph& g, const json& params, json& results) {
    double p = params.value("p", 2.0);
    double tol = params.value("tol", 1e-8);
    VertexSet ones, zeros;
    if (params.contains("x0")) {
        int x0 = g.require_vertex(require(params, "x0").get<std::string>());
        double r = require(params, "r").get<double>();
        double R = require(params, "R").get<double>();
        ones = ball(g, x0, r);
        auto outer = ball(g, x0, R);
        std::vector<bool> in_outer(g.vertex_count(), false);
        for (int v : outer) in_outer[v] = true;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (!in_outer[v]) zeros.push_back(v);
        if (ones.empty() || zeros.empty()) throw GraphError("condenser ball radii degenerate");
    } else {
        ones = id_set(g, require(params, "ones"));
        zeros = id_set(g, require(params, "zeros"));
    }
    auto res = capacity(g, ones, zeros, p, tol);
    results = {{"value", res.value},
               {"residual", res.residual},
               {"iterations", res.iterations},
               {"converged", res.converged},
               {"tol", tol},
               {"ones", id_list(g, ones)},
               {"zeros", id_list(g, zeros)}};
    if (params.value("include_potential", false))
        results["potential"] = vertex_series(g, res.minimizer.u, "u");
    return res.converged ? 0 : 2;
}

int cmd_classify(const MetricMeasureGraph& g, const json& params, json& results) {
    int x0 = g.require_vertex(require(params, "x0").get<std::string>());
    double p = params.value("p", 2.0);
    double inner = params.value("inner_radius", 1.0);
    std::vector<double> schedule = require(params, "schedule").get<std::vector<double>>();
    ClassificationThresholds th;
    if (params.contains("thresholds")) {
        const json& t = params.at("thresholds");
        th.divergence_sum = t.value("divergence_sum", th.divergence_sum);
        th.capacity_floor_factor = t.value("capacity_floor_factor", th.capacity_floor_factor);
        th.plateau_rel = t.value("plateau_rel", th.plateau_rel);
    }
    auto rep = classify_parabolic(g, x0, p, inner, schedule, th, params.value("tol", 1e-8));
    results = {{"verdict", rep.verdict},
               {"radii", rep.radii},
               {"capacities", rep.capacities},
               {"volume_partial_sums", rep.volume_partial_sums},
               {"shell_partial_sums", rep.shell_partial_sums},
               {"capacity_floor", rep.capacity_floor},
               {"schedule_exhausted", rep.schedule_exhausted},
               {"thresholds",
                {{"divergence_sum", th.divergence_sum},
                 {"capacity_floor_factor", th.capacity_floor_factor},
                 {"plateau_rel", th.plateau_rel}}}};
    return rep.schedule_exhausted ? 2 : 0;
}

int cmd_uniformize(const MetricMeasureGraph& g, const json& params, json& results) {
    UniformizationParams up;
    up.z0 = g.require_vertex(require(params, "z0").get<std::string>());
    up.eps = params.value("eps", 1.0);
    up.beta = params.value("beta", up.eps);
    auto hyp = gromov_delta(g, params.value("quadruple_budget", static_cast<long long>(2'000'000)),
                            params.value("seed", std::uint64_t{0}));
    double starlike = rough_starlike_constant(g, up.z0);
    auto ug = uniformized_graph(g, up);

    VertexSet sample;
    if (params.contains("sample")) {
        sample = id_set(g, params.at("sample"));
    } else {
        for (int v = 0; v < g.vertex_count(); ++v) sample.push_back(v);
    }
    auto cmp = comparison_constants(ug, sample);

    results = {{"four_point_delta", hyp.delta},
               {"quadruples", hyp.quadruples},
               {"exhaustive", hyp.exhaustive},
               {"rough_starlike_constant", starlike},
               {"eps", up.eps},
               {"beta", up.beta},
               {"k1", cmp.k1},
               {"w_eps", edge_series(g, ug.w_eps, "w_eps")},
               {"mu_beta", vertex_series(g, ug.mu_beta, "mu_beta")},
               {"rho_eps", vertex_series(g, ug.rho_eps, "rho_eps")}};
    if (params.contains("cluster_eta")) {
        json clusters = json::array();
        for (const auto& c : boundary_clusters(ug, params.at("cluster_eta").get<double>()))
            clusters.push_back(id_list(g, c));
        results["boundary_clusters"] = clusters;
    }
    return 0;
}

json witness_function_block(const WitnessFunction& f) {
    json out = {{"kind", f.kind},
                {"p", f.p},
                {"parameters", f.parameters},
                {"has_limit", f.has_limit},
                {"annulus_radii", f.annulus_radii}};
    if (f.has_limit) out["predicted_limit"] = f.predicted_limit;
    return out;
}

json witness_report_block(const WitnessReport& rep) {
    return {{"energy", rep.energy},
            {"annulus_radii", rep.annulus_radii},
            {"annulus_masses", rep.annulus_masses},
            {"c_grid", rep.c_grid},
            {"deficits", rep.deficits},
            {"floors", rep.floors},
            {"per_stair_mean", rep.per_stair_mean},
            {"verdicts", rep.verdicts},
            {"median_c", rep.median_c},
            {"last_k", rep.last_k}};
}

int cmd_witness(const json& params, const MetricMeasureGraph* graph, json& results) {
    std::string kind = require(params, "kind").get<std::string>();
    double p = params.value("p", 2.0);
    int last_k = params.value("last_k", 3);

    if (kind == "ahlfors") {
        auto f = ahlfors_witness(require(params, "s").get<double>(), p,
                                 require(params, "q").get<double>());
        json samples = json::array();
        for (double d : params.value("sample_distances",
                                     std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0, 16.0}))
            samples.push_back(
                {{"d", d}, {"value", ahlfors_value(f, d)}, {"lip_bound", ahlfors_lip_bound(f, d)}});
        results = {{"witness", witness_function_block(f)}, {"samples", samples}};
        return 0;
    }

    if (kind == "punctured_log") {
        auto model = punctured_log_witness(require(params, "q").get<double>(), p,
                                           params.value("mesh", 200),
                                           params.value("log_range", 8.0));
        auto grid = params.contains("c_grid") ? params.at("c_grid").get<std::vector<double>>()
                                              : default_c_grid(model.f);
        auto rep = evaluate_witness(model.graph, model.f, p, grid, last_k);
        results = {{"witness", witness_function_block(model.f)},
                   {"evaluation", witness_report_block(rep)}};
        return 0;
    }

    if (!graph) throw GraphError("witness kind \"" + kind + "\" needs a graph");
    const MetricMeasureGraph& g = *graph;
    WitnessFunction f;
    if (kind == "staircase") {
        int x0 = g.require_vertex(require(params, "x0").get<std::string>());
        f = staircase_witness(g, x0, p, params.value("c_d", 2.0));
    } else if (kind == "two_ends") {
        int x0 = g.require_vertex(require(params, "x0").get<std::string>());
        auto ends = detect_ends(g, x0, params.value("radius", 1.0));
        f = two_ends_witness(g, ends, params.value("chosen_end", 0), params.value("tau", 0.0));
    } else if (kind == "parabolic_staircase") {
        int x0 = g.require_vertex(require(params, "x0").get<std::string>());
        f = parabolic_staircase_witness(g, x0, p, params.value("budget", 4),
                                        params.value("tol", 1e-9));
    } else {
        throw GraphError("unknown witness kind \"" + kind + "\"");
    }
    auto grid = params.contains("c_grid") ? params.at("c_grid").get<std::vector<double>>()
                                          : default_c_grid(f);
    auto rep = evaluate_witness(g, f, p, grid, last_k);
    results = {{"witness", witness_function_block(f)},
               {"evaluation", witness_report_block(rep)}};
    return 0;
}

int cmd_hn(const json& params, json& results) {
    std::string mode = params.value("mode", "classify");
    if (mode != "classify") throw GraphError("unknown hn mode \"" + mode + "\"");
    auto rec = hn::hn_classification_harness(
        require(params, "n").get<int>(), require(params, "p").get<double>(),
        params.value("rmax", 14.0), params.value("radial", 280), params.value("angular", 64));
    results = {{"n", rec.n},
               {"p", rec.p},
               {"side", rec.side},
               {"consistent", rec.consistent},
               {"details", rec.details}};
    return 0;
}

int cmd_ends(const MetricMeasureGraph& g, const json& params, json& results) {
    int x0 = g.require_vertex(require(params, "x0").get<std::string>());
    double radius = params.value("radius", 1.0);
    auto dec = detect_ends(g, x0, radius);
    json ends = json::array();
    for (const auto& e : dec.ends) ends.push_back(id_list(g, e));
    results = {{"x0", g.vertex(x0).id},
               {"radius", radius},
               {"end_count", dec.ends.size()},
               {"ends", ends},
               {"bounded_components", dec.bounded_components.size()}};
    if (params.contains("scan_radii")) {
        auto scan =
            ends_stability_scan(g, x0, params.at("scan_radii").get<std::vector<double>>());
        results["scan"] = {{"radii", scan.radii},
                           {"counts", scan.counts},
                           {"stabilization_radius", scan.stabilization_radius}};
    }
    return 0;
}

int cmd_geometry(const MetricMeasureGraph& g, const json& params, json& results) {
    std::vector<double> scales =
        params.contains("scales") ? params.at("scales").get<std::vector<double>>()
                                  : std::vector<double>{1.0, 2.0, 4.0};
    VertexSet sample;
    if (params.contains("sample")) {
        sample = id_set(g, params.at("sample"));
    } else {
        for (int v = 0; v < g.vertex_count(); ++v) sample.push_back(v);
    }
    GeometryOptions opts;
    opts.r0 = params.value("r0", 1.0);
    opts.lambda = params.value("lambda", 2.0);
    opts.poincare_trials = params.value("poincare_trials", 16);
    opts.seed = params.value("seed", std::uint64_t{0});
    auto est = estimate_geometry(g, scales, sample, opts);
    results = {{"r0", est.r0},        {"c_d", est.c_d},
               {"c_pi", est.c_pi},    {"lambda", est.lambda},
               {"q_lower", est.q_lower}, {"s_upper", est.s_upper},
               {"beta0", est.beta0}};
    return 0;
}

}  // namespace

std::string library_version() { return kVersion; }

CommandOutcome run_command(const std::string& command, const nlohmann::json& params,
                           const MetricMeasureGraph* graph) {
    CommandOutcome out;
    out.report = {{"meta", meta_block(command, params)}, {"results", json::object()}};
    json& results = out.report["results"];
    try {
        if (command == "generate") {
            out.status = cmd_generate(params, results);
        } else if (command == "witness") {
            std::optional<MetricMeasureGraph> owned;
            const MetricMeasureGraph* g = graph;
            if (!g && (params.contains("graph") || params.contains("graph_file"))) {
                owned.emplace(load_graph(params));
                g = &*owned;
            }
            out.status = cmd_witness(params, g, results);
        } else if (command == "hn") {
            out.status = cmd_hn(params, results);
        } else {
            std::optional<MetricMeasureGraph> owned;
            const MetricMeasureGraph* g = graph;
            if (!g) {
                owned.emplace(load_graph(params));
                g = &*owned;
            }
            if (command == "modulus")
                out.status = cmd_modulus(*g, params, results);
            else if (command == "capacity")
                out.status = cmd_capacity(*g, params, results);
            else if (command == "classify")
                out.status = cmd_classify(*g, params, results);
            else if (command == "uniformize")
                out.status = cmd_uniformize(*g, params, results);
            else if (command == "ends")
                out.status = cmd_ends(*g, params, results);
            else if (command == "geometry")
                out.status = cmd_geometry(*g, params, results);
            else
                throw GraphError("unknown command \"" + command + "\"");
        }
    } catch (const GraphError& e) {
        out.status = 1;
        out.error = e.what();
        out.report["error"] = e.what();
    } catch (const nlohmann::json::exception& e) {
        out.status = 1;
        out.error = e.what();
        out.report["error"] = e.what();
    }
    return out;
}

}  // namespace potlab
