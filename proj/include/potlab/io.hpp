#ifndef POTLAB_IO_HPP
#define POTLAB_IO_HPP

#include <json.hpp>
#include <string>

#include "potlab/graph.hpp"

namespace potlab {

// Graph document: {"vertices":[{"id","mu","frontier"}], "edges":[{"u","v","len","sigma"?}]}.
// "sigma" is optional and defaults per the construction rule.
MetricMeasureGraph graph_from_json(const nlohmann::json& doc);
MetricMeasureGraph graph_from_json_string(const std::string& text);
MetricMeasureGraph graph_from_file(const std::string& path);

nlohmann::json graph_to_json(const MetricMeasureGraph& g);

}  // namespace potlab

#endif
