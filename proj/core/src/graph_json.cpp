#include "ncrg/graph_json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ncrg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

SlotRef parse_slot(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer())
        fail(where + ": expected [vertex, slot]");
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

GraphInput parse_graph_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("graph JSON: ") + e.what());
    }
    GraphInput out;
    if (j.contains("model")) {
        if (!j["model"].is_string()) fail("field 'model': expected string");
        out.model = j["model"].get<std::string>();
        if (out.model != "phi4" && out.model != "gross_neveu")
            fail("field 'model': expected \"phi4\" or \"gross_neveu\"");
    }
    if (j.contains("dimension")) {
        if (!j["dimension"].is_number_integer()) fail("field 'dimension': expected integer");
        out.dimension = j["dimension"].get<int>();
        if (out.dimension != 2 && out.dimension != 4)
            fail("field 'dimension': expected 2 or 4");
    }
    if (!j.contains("n_vertices") || !j["n_vertices"].is_number_integer())
        fail("field 'n_vertices': required integer");
    int n = j["n_vertices"].get<int>();
    if (n <= 0) fail("field 'n_vertices': must be positive");

    std::vector<RibbonEdge> edges;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) fail("field 'edges': expected array");
        int idx = 0;
        for (const auto& e : j["edges"]) {
            std::string where = "edges[" + std::to_string(idx++) + "]";
            if (!e.is_object() || !e.contains("a") || !e.contains("b"))
                fail(where + ": expected object with 'a' and 'b'");
            RibbonEdge edge;
            edge.a = parse_slot(e["a"], where + ".a");
            edge.b = parse_slot(e["b"], where + ".b");
            if (e.contains("scale")) {
                if (!e["scale"].is_number_integer() || e["scale"].get<int>() < 0)
                    fail(where + ".scale: expected natural number");
                edge.scale = e["scale"].get<int>();
            }
            edges.push_back(edge);
        }
    }
    std::vector<SlotRef> externals;
    if (j.contains("externals")) {
        if (!j["externals"].is_array()) fail("field 'externals': expected array");
        int idx = 0;
        for (const auto& x : j["externals"])
            externals.push_back(parse_slot(x, "externals[" + std::to_string(idx++) + "]"));
    }
    out.graph = RibbonGraph::quartic(n, std::move(edges), std::move(externals));

    if (j.contains("fields")) {
        if (!j["fields"].is_array() || static_cast<int>(j["fields"].size()) != n)
            fail("field 'fields': expected one slot list per vertex");
        std::vector<std::vector<FieldKind>> fields(n);
        for (int v = 0; v < n; ++v) {
            const auto& row = j["fields"][v];
            if (!row.is_array() || row.size() != 4)
                fail("fields[" + std::to_string(v) + "]: expected 4 entries");
            for (const auto& s : row) {
                if (!s.is_string()) fail("fields: expected \"psi\"/\"psibar\" strings");
                std::string v2 = s.get<std::string>();
                if (v2 == "psi")
                    fields[v].push_back(FieldKind::Psi);
                else if (v2 == "psibar")
                    fields[v].push_back(FieldKind::PsiBar);
                else
                    fail("fields: expected \"psi\" or \"psibar\", got \"" + v2 + "\"");
            }
        }
        out.graph.set_fields(std::move(fields));
    }
    return out;
}

GraphInput load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph_json(ss.str());
}

std::string graph_to_json(const GraphInput& g) {
    nlohmann::ordered_json j;
    j["model"] = g.model;
    j["dimension"] = g.dimension;
    j["n_vertices"] = g.graph.n_vertices();
    j["edges"] = json::array();
    for (const auto& e : g.graph.edges()) {
        nlohmann::ordered_json je;
        je["a"] = {e.a.vertex, e.a.slot};
        je["b"] = {e.b.vertex, e.b.slot};
        if (e.scale) je["scale"] = *e.scale;
        j["edges"].push_back(je);
    }
    j["externals"] = json::array();
    for (const auto& x : g.graph.externals()) j["externals"].push_back({x.vertex, x.slot});
    if (g.graph.has_fields()) {
        j["fields"] = json::array();
        for (int v = 0; v < g.graph.n_vertices(); ++v) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int s = 0; s < g.graph.valence(v); ++s)
                row.push_back(g.graph.field({v, s}) == FieldKind::Psi ? "psi" : "psibar");
            j["fields"].push_back(row);
        }
    }
    return j.dump(2);
}

}  // namespace ncrg
