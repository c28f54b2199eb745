#pragma once

#include <map>
#include <string>
#include <vector>

#include "ncrg/ribbon.hpp"

namespace ncrg {

// Slice index per edge; i = 0 is the infrared slice.
struct ScaleAttribution {
    std::vector<int> scale;  // indexed by edge id
    double slice_base = 2.0;

    static ScaleAttribution from_graph(const RibbonGraph& g, double base = 2.0);
};

enum class Regime { Commutative, Phi4X, GrossNeveuX, MatrixPhi4, MatrixGeneral };

Regime regime_from_string(const std::string& s);
std::string regime_name(Regime r);

struct RegimeParams {
    int dimension = 4;
    int delta0 = 2;  // matrix_general only
    int delta1 = 2;
};

struct OmegaVerdict {
    Regime regime = Regime::Commutative;
    int omega = 0;
    bool divergent = false;
    bool critical = false;  // GrossNeveuX only
};

// Quasi-local component G^i_k of (G, mu).
struct Component {
    int scale = 0;           // i_g(mu), the highest slice at which it appears
    int external_scale = 0;  // e_g(mu); -1 when only true externals attach
    std::vector<int> edges;
    std::vector<int> vertices;
    int n_vertices = 0;
    int N = 0;  // external legs as a subgraph
    int genus = 0;
    int broken_faces = 0;
    bool orientable = false;
    int parent = -1;
    std::vector<int> children;
};

struct ComponentTree {
    std::vector<Component> nodes;  // nodes[0] is G itself
    int root = 0;
};

ComponentTree components(const RibbonGraph& g, const ScaleAttribution& mu);

// Build the induced sub-ribbon-graph of an edge subset: vertices keep their
// slot layout, slots leaving the subset become external legs.
RibbonGraph subgraph_ribbon(const RibbonGraph& g, const std::vector<int>& edge_subset);

// Quasi-locality data of an arbitrary connected edge subset.
struct QuasiLocality {
    int i_g = 0;  // min internal scale
    int e_g = 0;  // max external-leg scale, -1 for true externals only
    bool quasi_local = false;
};
QuasiLocality quasi_locality(const RibbonGraph& g, const ScaleAttribution& mu,
                             const std::vector<int>& edge_subset);

// Power-counting degree of one component in the chosen regime. Sign
// conventions follow the source tables per regime and are not normalized:
// x-space and matrix_general omegas are convergence degrees (divergent when
// omega <= 0), matrix_phi4 omega is a divergence degree (divergent when
// omega >= 0).
OmegaVerdict omega_of(const Component& c, Regime regime, const RegimeParams& params,
                      bool critical = false);

// Label every component; detects Gross-Neveu critical components from the
// tree context.
std::vector<OmegaVerdict> classify(const RibbonGraph& g, const ScaleAttribution& mu,
                                   ComponentTree& tree, Regime regime,
                                   const RegimeParams& params);

struct ScanRow {
    int i_max = 0;
    double partial_sum = 0;
    long long n_attributions = 0;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    bool convergent = false;     // geometric-ratio test on increments
    double ratio = 0;            // fitted increment ratio
    double affine_slope = 0;     // growth per unit i_max (marginal graphs)
    double affine_r2 = 0;
};

// Sum of prod_{(i,k)} M^{-omega(G^i_k)} over all attributions with scales
// <= i_max, reported cumulatively per i_max. Desk scale only.
ScanReport attribution_scan(const RibbonGraph& g, int i_max, Regime regime,
                            const RegimeParams& params, double slice_base = 2.0);

}  // namespace ncrg
