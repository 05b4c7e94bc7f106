// Command-line front end.  All computation goes through the C API in
// potlab.h; this file only assembles parameter documents, dispatches, and
// writes reports and CSV companions.

#include <potlab.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;

int worker_cap() {
    if (const char* env = std::getenv("POTLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 4;
}

bool write_file(const std::string& path, const std::string& text, std::string& err) {
    std::ofstream out(path);
    if (!out) {
        err = "cannot open output file " + path;
        return false;
    }
    out << text << "\n";
    return out.good();
}

void append_csv_rows(const json& results, const std::string& command, std::ostream& os) {
    if (command == "classify") {
        os << "radius,capacity,volume_partial_sum,shell_partial_sum\n";
        const auto& radii = results.at("radii");
        const auto& caps = results.at("capacities");
        const auto& vol = results.at("volume_partial_sums");
        const auto& shell = results.at("shell_partial_sums");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            os << radii[i].get<double>() << ",";
            os << (i < caps.size() ? std::to_string(caps[i].get<double>()) : "") << ",";
            os << (i < vol.size() ? std::to_string(vol[i].get<double>()) : "") << ",";
            os << (i < shell.size() ? std::to_string(shell[i].get<double>()) : "") << "\n";
        }
    } else if (command == "modulus") {
        os << "u,v,rho\n";
        for (const auto& row : results.at("rho"))
            os << row.at("u").get<std::string>() << "," << row.at("v").get<std::string>() << ","
               << row.at("rho").get<double>() << "\n";
    } else if (command == "uniformize") {
        os << "id,rho_eps,mu_beta\n";
        const auto& rho = results.at("rho_eps");
        const auto& mu = results.at("mu_beta");
        for (std::size_t i = 0; i < rho.size(); ++i)
            os << rho[i].at("id").get<std::string>() << "," << rho[i].at("rho_eps").get<double>()
               << "," << mu[i].at("mu_beta").get<double>() << "\n";
    } else if (command == "witness" && results.contains("evaluation")) {
        os << "annulus_radius,annulus_mass,median_c\n";
        const auto& ev = results.at("evaluation");
        const auto& radii = ev.at("annulus_radii");
        const auto& masses = ev.at("annulus_masses");
        const auto& med = ev.at("median_c");
        for (std::size_t i = 0; i < masses.size(); ++i)
            os << radii[i].get<double>() << "," << masses[i].get<double>() << ","
               << (i < med.size() ? std::to_string(med[i].get<double>()) : "") << "\n";
    } else if (command == "hn") {
        const auto& details = results.at("details");
        if (details.contains("functions")) {
            os << "function,radius,measured_difference,bound\n";
            for (const auto& fn : details.at("functions"))
                for (const auto& chk : fn.at("lateral_checks"))
                    os << fn.at("name").get<std::string>() << "," << chk.at("r").get<double>()
                       << "," << chk.at("lhs").get<double>() << "," << chk.at("rhs").get<double>()
                       << "\n";
        } else {
            os << "c,truncated_deviation_half,truncated_deviation_full\n";
            for (const auto& row : details.at("truncations"))
                os << row.at("c").get<double>() << "," << row.at("half").get<double>() << ","
                   << row.at("full").get<double>() << "\n";
        }
    }
}

// Runs one command through the C API and writes its outputs.  Returns the
// process-level exit status (0 ok, 1 input error, 2 non-convergence).
int run_one(const std::string& command, const json& params, const std::string& out_path,
            const std::string& csv_path, bool quiet) {
    char* report_text = nullptr;
    int rc = potlab_run(command.c_str(), params.dump().c_str(), nullptr, &report_text);
    std::string report = report_text ? report_text : "{}";
    potlab_string_free(report_text);

    if (rc == POTLAB_INVALID) {
        std::cerr << "error: " << potlab_last_error() << "\n";
    } else if (rc == POTLAB_NONCONVERGED) {
        std::cerr << "warning: numerical non-convergence; partial report written\n";
    }

    std::string payload = report;
    if (command == "generate" && rc == POTLAB_OK) {
        // The generate subcommand emits the graph document itself.
        payload = json::parse(report).at("results").at("graph").dump(2);
    }

    std::string err;
    if (out_path.empty()) {
        if (!quiet) std::cout << payload << "\n";
    } else if (!write_file(out_path, payload, err)) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }

    if (!csv_path.empty() && rc != POTLAB_INVALID) {
        std::ostringstream csv;
        append_csv_rows(json::parse(report).at("results"), command, csv);
        if (!write_file(csv_path, csv.str(), err)) {
            std::cerr << "error: " << err << "\n";
            return 1;
        }
    }
    return rc == POTLAB_OK ? 0 : (rc == POTLAB_NONCONVERGED ? 2 : 1);
}

int run_batch(const std::string& batch_path) {
    std::ifstream in(batch_path);
    if (!in) {
        std::cerr << "error: cannot open batch file " << batch_path << "\n";
        return 1;
    }
    struct Job {
        std::string command;
        json params;
        std::string out;
        std::string csv;
    };
    std::vector<Job> jobs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.contains("command") || !doc.contains("out")) {
            std::cerr << "error: batch lines must be JSON objects with \"command\" and \"out\"\n";
            return 1;
        }
        jobs.push_back({doc.at("command").get<std::string>(), doc.value("params", json::object()),
                        doc.at("out").get<std::string>(), doc.value("csv", std::string())});
    }

    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            int rc = run_one(jobs[i].command, jobs[i].params, jobs[i].out, jobs[i].csv, true);
            int prev = worst.load();
            while (rc > prev && !worst.compare_exchange_weak(prev, rc)) {
            }
        }
    };
    int n = std::min<int>(worker_cap(), static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, n); ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return worst.load();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"potlab: p-modulus, p-capacity, classification, uniformization, witness "
                 "functions, and hyperbolic-space diagnostics"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", std::string(potlab_version()));

    std::string batch_file;
    app.add_option("--batch", batch_file,
                   "run newline-delimited JSON jobs {\"command\",\"params\",\"out\"} concurrently "
                   "(POTLAB_THREADS caps workers)");

    // Shared per-subcommand state.
    std::string graph_file, out_path, csv_path;
    double p = 2.0, tol = 1e-8;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool needs_graph) {
        if (needs_graph)
            sub->add_option("--graph", graph_file, "graph document (JSON file)")->required();
        sub->add_option("--out", out_path, "report output path (default: stdout)");
        sub->add_option("--csv", csv_path, "CSV companion output path");
        sub->add_option("--seed", seed, "seed for randomized procedures");
        return sub;
    };
    auto base_params = [&](bool with_graph) {
        json params = {{"seed", seed}};
        if (with_graph && !graph_file.empty()) params["graph_file"] = graph_file;
        return params;
    };

    // modulus
    auto* modulus = add_common(app.add_subcommand("modulus", "discrete p-modulus"), true);
    std::vector<std::string> source, target, forbidden;
    bool escape = false;
    modulus->add_option("--source", source)->required();
    modulus->add_option("--target", target);
    modulus->add_flag("--escape", escape, "connect to the frontier instead of --target");
    modulus->add_option("--forbidden", forbidden);
    modulus->add_option("--p", p);
    modulus->add_option("--tol", tol);

    // capacity
    auto* cap = add_common(app.add_subcommand("capacity", "relative p-capacity"), true);
    std::vector<std::string> ones, zeros;
    std::string x0;
    double r_inner = 0.0, r_outer = 0.0;
    bool include_potential = false;
    cap->add_option("--ones", ones);
    cap->add_option("--zeros", zeros);
    cap->add_option("--x0", x0);
    cap->add_option("--r", r_inner);
    cap->add_option("--R", r_outer);
    cap->add_flag("--include-potential", include_potential);
    cap->add_option("--p", p);
    cap->add_option("--tol", tol);

    // classify
    auto* classify = add_common(app.add_subcommand("classify", "parabolic/hyperbolic verdict"),
                                true);
    std::string classify_x0;
    double inner_radius = 1.0;
    std::vector<double> schedule;
    classify->add_option("--x0", classify_x0)->required();
    classify->add_option("--inner-radius", inner_radius);
    classify->add_option("--schedule", schedule, "outer radii")->required();
    classify->add_option("--p", p);
    classify->add_option("--tol", tol);

    // uniformize
    auto* unif = add_common(app.add_subcommand("uniformize", "Gromov uniformization"), true);
    std::string z0;
    double eps = 1.0, beta = -1.0, cluster_eta = -1.0;
    long long budget = 2'000'000;
    unif->add_option("--z0", z0)->required();
    unif->add_option("--eps", eps);
    unif->add_option("--beta", beta, "measure density exponent (default: eps)");
    unif->add_option("--budget", budget, "four-point quadruple budget");
    unif->add_option("--cluster-eta", cluster_eta, "boundary clustering threshold");

    // witness
    auto* wit = add_common(app.add_subcommand("witness", "witness construction + evaluation"),
                           false);
    std::string kind, wx0;
    double c_d = 2.0, q = 0.25, log_range = 8.0, tau = 0.0, s_reg = 2.0, wradius = 1.0;
    int mesh = 200, wbudget = 4, chosen_end = 0, last_k = 3;
    wit->add_option("--graph", graph_file, "graph document (JSON file)");
    wit->add_option("--kind", kind,
                    "staircase | two_ends | parabolic_staircase | punctured_log | ahlfors")
        ->required();
    wit->add_option("--x0", wx0);
    wit->add_option("--p", p);
    wit->add_option("--c-d", c_d, "doubling constant for the staircase");
    wit->add_option("--q", q, "exponent (punctured_log, ahlfors)");
    wit->add_option("--s", s_reg, "regularity exponent (ahlfors)");
    wit->add_option("--mesh", mesh);
    wit->add_option("--log-range", log_range);
    wit->add_option("--radius", wradius, "ends-detection radius (two_ends)");
    wit->add_option("--chosen-end", chosen_end);
    wit->add_option("--tau", tau, "collar width (two_ends, 0 = auto)");
    wit->add_option("--budget", wbudget, "stair budget (parabolic_staircase)");
    wit->add_option("--last-k", last_k);

    // hn
    auto* hn = add_common(app.add_subcommand("hn", "hyperbolic-space diagnostics"), false);
    int n_dim = 2, radial = 280, angular = 64;
    double rmax = 14.0;
    std::string mode = "classify";
    hn->add_option("--n", n_dim)->required();
    hn->add_option("--p", p)->required();
    hn->add_option("--rmax", rmax);
    hn->add_option("--radial", radial);
    hn->add_option("--angular", angular);
    hn->add_option("--mode", mode);

    // ends
    auto* ends = add_common(app.add_subcommand("ends", "ends decomposition"), true);
    std::string ex0;
    double eradius = 1.0;
    std::vector<double> scan;
    ends->add_option("--x0", ex0)->required();
    ends->add_option("--radius", eradius);
    ends->add_option("--scan", scan, "stability-scan radii");

    // geometry
    auto* geo = add_common(app.add_subcommand("geometry", "doubling/Poincare estimates"), true);
    std::vector<double> scales;
    double r0 = 1.0, lambda = 2.0;
    int trials = 16;
    geo->add_option("--scales", scales);
    geo->add_option("--r0", r0);
    geo->add_option("--lambda", lambda);
    geo->add_option("--trials", trials);

    // generate
    auto* gen = add_common(app.add_subcommand("generate", "write a generated graph document"),
                           false);
    std::string gen_kind, gen_params = "{}";
    gen->add_option("--kind", gen_kind)->required();
    gen->add_option("--params", gen_params, "generator parameters (JSON object)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (!batch_file.empty()) return run_batch(batch_file);
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    json params;

    if (name == "modulus") {
        params = base_params(true);
        params["p"] = p;
        params["tol"] = tol;
        params["source"] = source;
        params["escape"] = escape;
        if (!target.empty()) params["target"] = target;
        if (!forbidden.empty()) params["forbidden"] = forbidden;
        if (!escape && target.empty()) {
            std::cerr << "error: modulus needs --target or --escape\n";
            return 1;
        }
    } else if (name == "capacity") {
        params = base_params(true);
        params["p"] = p;
        params["tol"] = tol;
        if (!x0.empty()) {
            params["x0"] = x0;
            params["r"] = r_inner;
            params["R"] = r_outer;
        } else {
            params["ones"] = ones;
            params["zeros"] = zeros;
        }
        if (include_potential) params["include_potential"] = true;
    } else if (name == "classify") {
        params = base_params(true);
        params["p"] = p;
        params["tol"] = tol;
        params["x0"] = classify_x0;
        params["inner_radius"] = inner_radius;
        params["schedule"] = schedule;
    } else if (name == "uniformize") {
        params = base_params(true);
        params["z0"] = z0;
        params["eps"] = eps;
        params["beta"] = beta < 0.0 ? eps : beta;
        params["quadruple_budget"] = budget;
        if (cluster_eta >= 0.0) params["cluster_eta"] = cluster_eta;
    } else if (name == "witness") {
        params = base_params(true);
        params["kind"] = kind;
        params["p"] = p;
        params["last_k"] = last_k;
        if (!wx0.empty()) params["x0"] = wx0;
        if (kind == "staircase") params["c_d"] = c_d;
        if (kind == "punctured_log") {
            params["q"] = q;
            params["mesh"] = mesh;
            params["log_range"] = log_range;
        }
        if (kind == "ahlfors") {
            params["q"] = q;
            params["s"] = s_reg;
        }
        if (kind == "two_ends") {
            params["radius"] = wradius;
            params["chosen_end"] = chosen_end;
            params["tau"] = tau;
        }
        if (kind == "parabolic_staircase") params["budget"] = wbudget;
    } else if (name == "hn") {
        params = base_params(false);
        params["n"] = n_dim;
        params["p"] = p;
        params["rmax"] = rmax;
        params["radial"] = radial;
        params["angular"] = angular;
        params["mode"] = mode;
    } else if (name == "ends") {
        params = base_params(true);
        params["x0"] = ex0;
        params["radius"] = eradius;
        if (!scan.empty()) params["scan_radii"] = scan;
    } else if (name == "geometry") {
        params = base_params(true);
        if (!scales.empty()) params["scales"] = scales;
        params["r0"] = r0;
        params["lambda"] = lambda;
        params["poincare_trials"] = trials;
    } else if (name == "generate") {
        params = base_params(false);
        params["kind"] = gen_kind;
        json parsed = json::parse(gen_params, nullptr, false);
        if (parsed.is_discarded()) {
            std::cerr << "error: --params must be a JSON object\n";
            return 1;
        }
        params["params"] = parsed;
    }

    return run_one(name, params, out_path, csv_path, false);
}
