#pragma once

#include "ncrg/ribbon.hpp"

namespace ncrg::testing {

// Triangle with one vertex carrying its edges on opposite slots:
// V=3, I=3, F=2, B=2, g=0.
inline RibbonGraph planar_topo_fixture() {
    return RibbonGraph::quartic(
        3, {{{0, 0}, {1, 1}, {}}, {{1, 0}, {2, 1}, {}}, {{2, 0}, {0, 2}, {}}},
        {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 2}, {2, 3}});
}

// Two vertices joined by three parallel lines: V=2, I=3, F=1, B=1, g=1.
inline RibbonGraph nonplanar_sunset(std::vector<int> scales = {}) {
    std::vector<RibbonEdge> edges{{{0, 0}, {1, 0}, {}}, {{0, 1}, {1, 1}, {}},
                                  {{0, 2}, {1, 2}, {}}};
    for (size_t i = 0; i < scales.size() && i < 3; ++i) edges[i].scale = scales[i];
    return RibbonGraph::quartic(2, edges, {{0, 3}, {1, 3}});
}

// One vertex, self-loops pairing slots (0,2) and (1,3): g=1, vacuum.
inline RibbonGraph crossing_tadpole() {
    return RibbonGraph::quartic(1, {{{0, 0}, {0, 2}, {}}, {{0, 1}, {0, 3}, {}}}, {});
}

// Bubble insertion between two external pairs, scales optional.
inline RibbonGraph bubble(int scale0 = 2, int scale1 = 1) {
    return RibbonGraph::quartic(2, {{{0, 0}, {1, 0}, scale0}, {{0, 1}, {1, 3}, scale1}},
                                {{0, 2}, {0, 3}, {1, 1}, {1, 2}});
}

// The overlapping-divergence graph: bubble (edges 0,1) between vertices 0 and
// 1, closed by vertices 2 and 3 into the two overlapping four-point
// subgraphs {0,1,2,3} and {0,1,4,5}.
inline RibbonGraph eye_graph(std::vector<int> scales = {}) {
    std::vector<RibbonEdge> edges{{{0, 0}, {1, 0}, {}}, {{0, 2}, {1, 2}, {}},
                                  {{0, 1}, {2, 0}, {}}, {{1, 3}, {2, 2}, {}},
                                  {{0, 3}, {3, 0}, {}}, {{1, 1}, {3, 2}, {}}};
    for (size_t i = 0; i < scales.size() && i < 6; ++i) edges[i].scale = scales[i];
    return RibbonGraph::quartic(4, edges, {{2, 1}, {2, 3}, {3, 1}, {3, 3}});
}

// Chain of two bubbles: divergent subgraphs are the two bubbles, the two
// bubble+joint subgraphs and the whole graph.
inline RibbonGraph double_bubble(std::vector<int> scales = {}) {
    std::vector<RibbonEdge> edges{{{0, 0}, {1, 0}, {}}, {{0, 1}, {1, 3}, {}},
                                  {{1, 1}, {2, 1}, {}}, {{1, 2}, {2, 0}, {}}};
    for (size_t i = 0; i < scales.size() && i < 4; ++i) edges[i].scale = scales[i];
    return RibbonGraph::quartic(3, edges, {{0, 2}, {0, 3}, {2, 2}, {2, 3}});
}

// Chain of three bubbles (4 vertices, 6 lines, N=4).
inline RibbonGraph triple_bubble(std::vector<int> scales = {}) {
    std::vector<RibbonEdge> edges{{{0, 0}, {1, 0}, {}}, {{0, 1}, {1, 3}, {}},
                                  {{1, 1}, {2, 1}, {}}, {{1, 2}, {2, 0}, {}},
                                  {{2, 2}, {3, 0}, {}}, {{2, 3}, {3, 1}, {}}};
    for (size_t i = 0; i < scales.size() && i < 6; ++i) edges[i].scale = scales[i];
    return RibbonGraph::quartic(4, edges, {{0, 2}, {0, 3}, {3, 2}, {3, 3}});
}

// Completely convergent six-point fixture: triangle of single lines.
inline RibbonGraph convergent_sixpoint(std::vector<int> scales = {}) {
    std::vector<RibbonEdge> edges{{{0, 0}, {1, 1}, {}}, {{1, 0}, {2, 1}, {}},
                                  {{2, 0}, {0, 1}, {}}};
    for (size_t i = 0; i < scales.size() && i < 3; ++i) edges[i].scale = scales[i];
    return RibbonGraph::quartic(3, edges, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 2}, {2, 3}});
}

// Gross-Neveu critical pattern: the bubble on opposite slots (edges 0,1 at
// the high scale) is a four-point planar component with two broken faces,
// each holding two external corners; edge 2 closes the corners of one face
// below, leaving a two-point graph. The insertion is that single line.
inline RibbonGraph gn_critical_fixture(int inner_scale = 5, int closing_scale = 1) {
    std::vector<RibbonEdge> edges{
        {{0, 0}, {1, 0}, inner_scale},
        {{0, 2}, {1, 2}, inner_scale},
        {{0, 1}, {1, 3}, closing_scale},
    };
    return RibbonGraph::quartic(2, edges, {{0, 3}, {1, 1}});
}

// Same bubble, its second face closed by a three-line insertion through an
// extra vertex: the component stays four-point/two-broken-faces but is not
// critical.
inline RibbonGraph gn_noncritical_fixture(int inner_scale = 5, int mid_scale = 2,
                                          int low_scale = 1) {
    std::vector<RibbonEdge> edges{
        {{0, 0}, {1, 0}, inner_scale},
        {{0, 2}, {1, 2}, inner_scale},
        {{0, 1}, {2, 0}, mid_scale},
        {{1, 3}, {2, 2}, mid_scale},
        {{2, 1}, {2, 3}, low_scale},
    };
    return RibbonGraph::quartic(3, edges, {{0, 3}, {1, 1}});
}

}  // namespace ncrg::testing
