#pragma once

#include <vector>

#include "ncrg/multiscale.hpp"
#include "ncrg/ribbon.hpp"

namespace ncrg {

// Connected subgraph identified by its sorted edge set.
struct Subgraph {
    std::vector<int> edges;
    int N = 0;  // external legs as a subgraph, 4n - 2I
};

enum class DivergenceScope { TwoAndFourPoint, FourPointOnly };

// All connected subgraphs with N in {2,4} (or {4}); the forest substrate.
// Includes G itself when divergent. Rejects graphs with more than 8 vertices.
std::vector<Subgraph> divergent_subgraphs(const RibbonGraph& g,
                                          DivergenceScope scope = DivergenceScope::TwoAndFourPoint);

// A forest is a subset of the substrate, pairwise nested or disjoint;
// elements are indices into the substrate list. The empty forest counts.
using Forest = std::vector<int>;

std::vector<Forest> all_forests(const std::vector<Subgraph>& substrate);

bool is_forest(const std::vector<Subgraph>& substrate, const Forest& f);

// Relative indices of an element within a forest: internal lines above the
// children union, external lines within the ancestor.
struct RelativeIndices {
    int i_g = 0;
    int e_g = 0;
};
RelativeIndices relative_indices(const RibbonGraph& g, const ScaleAttribution& mu,
                                 const std::vector<Subgraph>& substrate, const Forest& f,
                                 int member);

struct ForestSplit {
    Forest dangerous;    // D_mu(F)
    Forest inoffensive;  // T_mu(F)
};
ForestSplit classify_forest(const RibbonGraph& g, const ScaleAttribution& mu,
                            const std::vector<Subgraph>& substrate, const Forest& f);

// T_mu as a map on forests.
Forest t_mu(const RibbonGraph& g, const ScaleAttribution& mu,
            const std::vector<Subgraph>& substrate, const Forest& f);

// H_mu(F) for an inoffensive forest: subgraphs compatible with F that become
// dangerous when appended. Throws if T_mu(F) != F.
Forest completion(const RibbonGraph& g, const ScaleAttribution& mu,
                  const std::vector<Subgraph>& substrate, const Forest& f);

}  // namespace ncrg
