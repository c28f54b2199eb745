#pragma once

#include <string>

#include "ncrg/ribbon.hpp"

namespace ncrg {

// Graph file contents: the ribbon graph plus model metadata.
struct GraphInput {
    std::string model = "phi4";  // "phi4" or "gross_neveu"
    int dimension = 4;
    RibbonGraph graph;
};

// Parses the graph JSON schema:
//   {"model": "phi4"|"gross_neveu", "dimension": 2|4, "n_vertices": n,
//    "edges": [{"a":[v,s],"b":[v,s],"scale":i?}, ...],
//    "externals": [[v,s],...],
//    "fields": [["psi","psibar",...] per vertex]?}
// Throws std::invalid_argument naming the offending field.
GraphInput parse_graph_json(const std::string& text);
GraphInput load_graph_file(const std::string& path);

std::string graph_to_json(const GraphInput& g);

}  // namespace ncrg
