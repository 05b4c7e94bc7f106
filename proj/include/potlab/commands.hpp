#ifndef POTLAB_COMMANDS_HPP
#define POTLAB_COMMANDS_HPP

#include <json.hpp>
#include <string>

#include "potlab/graph.hpp"

namespace potlab {

// Uniform command surface shared by the shared-library API and the CLI.
// Every command takes a JSON parameter object and produces a report
// document {"meta": {...}, "results": {...}}.  Identical parameters
// (including seeds) produce byte-identical "results" blocks.
//
// status: 0 = success, 1 = invalid input, 2 = numerical non-convergence
// (the partial report is still populated).
struct CommandOutcome {
    int status = 0;
    nlohmann::json report;
    std::string error;
};

// command is one of: generate | modulus | capacity | classify | uniformize |
// witness | hn | ends | geometry.  When `graph` is non-null it overrides any
// "graph" / "graph_file" entry in params.
CommandOutcome run_command(const std::string& command, const nlohmann::json& params,
                           const MetricMeasureGraph* graph = nullptr);

std::string library_version();

}  // namespace potlab

#endif
