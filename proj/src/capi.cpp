#include "potlab.h"

#include <cstring>
#include <new>
#include <string>

#include "potlab/commands.hpp"
#include "potlab/generators.hpp"
#include "potlab/io.hpp"

struct potlab_graph {
    potlab::MetricMeasureGraph g;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int fail(int code, const std::string& msg) {
    t_last_error = msg;
    return code;
}

int ok() {
    t_last_error.clear();
    return POTLAB_OK;
}

}  // namespace

extern "C" {

const char* potlab_version(void) {
    static const std::string v = potlab::library_version();
    return v.c_str();
}

const char* potlab_last_error(void) { return t_last_error.c_str(); }

void potlab_string_free(char* s) { delete[] s; }

int potlab_graph_from_json(const char* json_text, potlab_graph** out) {
    if (!json_text || !out) return fail(POTLAB_INVALID, "null argument");
    *out = nullptr;
    try {
        auto g = potlab::graph_from_json_string(json_text);
        *out = new potlab_graph{std::move(g)};
        return ok();
    } catch (const std::exception& e) {
        return fail(POTLAB_INVALID, e.what());
    }
}

int potlab_graph_generate(const char* kind, const char* params_json, potlab_graph** out) {
    if (!kind || !out) return fail(POTLAB_INVALID, "null argument");
    *out = nullptr;
    try {
        nlohmann::json params =
            params_json ? nlohmann::json::parse(params_json) : nlohmann::json::object();
        potlab::MetricMeasureGraph g =
            std::string(kind) == "random"
                ? potlab::random_connected_graph(params.value("vertices", 20),
                                                 params.value("extra_edges", 8),
                                                 params.value("seed", std::uint64_t{0}))
                : potlab::generate_graph(kind, params);
        *out = new potlab_graph{std::move(g)};
        return ok();
    } catch (const std::exception& e) {
        return fail(POTLAB_INVALID, e.what());
    }
}

int potlab_graph_to_json(const potlab_graph* g, char** out_text) {
    if (!g || !out_text) return fail(POTLAB_INVALID, "null argument");
    try {
        *out_text = dup_string(potlab::graph_to_json(g->g).dump(2));
        if (!*out_text) return fail(POTLAB_INTERNAL, "allocation failed");
        return ok();
    } catch (const std::exception& e) {
        return fail(POTLAB_INTERNAL, e.what());
    }
}

void potlab_graph_free(potlab_graph* g) { delete g; }

int potlab_run(const char* command, const char* params_json, const potlab_graph* g,
               char** out_report) {
    if (!command || !out_report) return fail(POTLAB_INVALID, "null argument");
    *out_report = nullptr;
    try {
        nlohmann::json params =
            params_json ? nlohmann::json::parse(params_json) : nlohmann::json::object();
        auto outcome = potlab::run_command(command, params, g ? &g->g : nullptr);
        *out_report = dup_string(outcome.report.dump(2));
        if (!*out_report) return fail(POTLAB_INTERNAL, "allocation failed");
        if (outcome.status == 0) return ok();
        t_last_error = outcome.error;
        return outcome.status == 2 ? POTLAB_NONCONVERGED : POTLAB_INVALID;
    } catch (const nlohmann::json::exception& e) {
        return fail(POTLAB_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(POTLAB_INTERNAL, e.what());
    }
}

}  // extern "C"
