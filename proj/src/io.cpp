#include "potlab/io.hpp"

#include <fstream>

namespace potlab {

using nlohmann::json;

MetricMeasureGraph graph_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw GraphError("graph document needs \"vertices\" and \"edges\" arrays");

    std::vector<Vertex> verts;
    std::unordered_map<std::string, int> index;
    for (const auto& jv : doc.at("vertices")) {
        Vertex v;
        v.id = jv.at("id").get<std::string>();
        v.mu = jv.value("mu", 1.0);
        v.frontier = jv.value("frontier", false);
        if (index.count(v.id)) throw GraphError("duplicate vertex id \"" + v.id + "\"");
        index[v.id] = static_cast<int>(verts.size());
        verts.push_back(std::move(v));
    }

    std::vector<Edge> edges;
    for (const auto& je : doc.at("edges")) {
        Edge e;
        auto u = je.at("u").get<std::string>();
        auto v = je.at("v").get<std::string>();
        auto iu = index.find(u), iv = index.find(v);
        if (iu == index.end()) throw GraphError("edge references unknown vertex \"" + u + "\"");
        if (iv == index.end()) throw GraphError("edge references unknown vertex \"" + v + "\"");
        e.u = iu->second;
        e.v = iv->second;
        e.len = je.value("len", 1.0);
        e.sigma = je.value("sigma", -1.0);  // negative = absent, filled by the default rule
        edges.push_back(e);
    }
    return MetricMeasureGraph(std::move(verts), std::move(edges));
}

MetricMeasureGraph graph_from_json_string(const std::string& text) {
    return graph_from_json(json::parse(text));
}

MetricMeasureGraph graph_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file \"" + path + "\"");
    json doc;
    in >> doc;
    return graph_from_json(doc);
}

json graph_to_json(const MetricMeasureGraph& g) {
    json doc;
    doc["vertices"] = json::array();
    for (const Vertex& v : g.vertices()) {
        json jv{{"id", v.id}, {"mu", v.mu}, {"frontier", v.frontier}};
        doc["vertices"].push_back(std::move(jv));
    }
    doc["edges"] = json::array();
    for (const Edge& e : g.edges()) {
        json je{{"u", g.vertex(e.u).id},
                {"v", g.vertex(e.v).id},
                {"len", e.len},
                {"sigma", e.sigma}};
        doc["edges"].push_back(std::move(je));
    }
    return doc;
}

}  // namespace potlab
