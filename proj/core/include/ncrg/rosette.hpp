#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ncrg/numerics.hpp"
#include "ncrg/ribbon.hpp"

namespace ncrg {

// Variable basis for line-variable phases: externals x_k, short u_l (all
// lines), long v_l (tree), long w_l (loops), tree momenta p_l, and raw corner
// positions s_p (tree-reduced form only).
enum class VarKind : uint8_t { External, U, V, W, P, Corner };

struct Var {
    VarKind kind;
    int id;  // external index, edge id, or corner position
    auto operator<=>(const Var&) const = default;
};

// (half/2) * a (op) b with op = wedge for phase terms, dot for momentum terms.
struct PhaseTerm {
    Var a, b;
    long long half;
};

struct LinearTerm {
    Var v;
    long long coeff;
};

struct RosetteFactor {
    std::vector<LinearTerm> delta_arg;  // global delta argument
    std::vector<PhaseTerm> phase;       // wedge terms
    std::vector<PhaseTerm> dots;        // dot terms (delta-as-oscillation mode)
};

// Rosette after reducing the tree lines only: phase over the remaining
// corner positions and the u, v of tree lines.
RosetteFactor tree_reduce(const OrientedGraph& og);

// Full reduction: phase over externals, u of all lines, w of loops.
// With keep_deltas_as_oscillations, branch deltas are emitted as p-dot terms
// instead of being resolved.
RosetteFactor rosette(const OrientedGraph& og, bool keep_deltas_as_oscillations = false);

// Substitute every tree long variable by its branch-delta resolution,
// leaving a phase over externals, u and w only.
RosetteFactor resolve_tree_longs(const OrientedGraph& og, const RosetteFactor& rf);

// Sum of the counterclockwise and sign-corrected clockwise traversal forms,
// i.e. twice the symmetrized phase (orientable graphs); its external-u block
// vanishes.
RosetteFactor symmetrized_rosette(const RibbonGraph& g, const std::vector<int>& tree,
                                  SlotRef root);

// Collect the antisymmetric coefficient matrix of a variable-kind pair;
// entries are twice the wedge coefficient (exact integers).
std::vector<std::vector<long long>> phase_block(const RosetteFactor& rf, VarKind row,
                                                VarKind col, int rows, int cols);

// Q_W block over loop lines (columns indexed by loop order in the graph).
std::vector<std::vector<long long>> intersection_matrix(const OrientedGraph& og,
                                                        const RosetteFactor& rf);
int intersection_rank(const OrientedGraph& og, const RosetteFactor& rf);

// A delta-consistent assignment of every variable.
struct OracleSample {
    std::vector<Vec2> x;  // per external
    std::vector<Vec2> u;  // per edge
    std::vector<Vec2> v;  // per edge (tree entries meaningful)
    std::vector<Vec2> w;  // per edge (loop entries meaningful)
};

OracleSample make_sample(const OrientedGraph& og, std::mt19937_64& rng);

// Reconstructs all corner positions, checks every vertex delta to 1e-12 and
// returns the summed vertex oscillation.
double phase_oracle(const OrientedGraph& og, const OracleSample& sample, double theta = 1.0);

double eval_phase(const OrientedGraph& og, const std::vector<PhaseTerm>& phase,
                  const OracleSample& sample, double theta = 1.0);

struct OracleReport {
    int samples = 0;
    double max_abs_error = 0;
};
OracleReport oracle_report(const OrientedGraph& og, const RosetteFactor& rf, int n_samples,
                           uint64_t seed, double theta = 1.0);

// Triangular change of variables (eps*v, eps*w) -> (eps*V, eps*W) generated
// by the masselotte construction; p-terms excluded from the block.
struct MasselotteChange {
    std::vector<int> line_order;  // edge ids sorted by first corner position
    std::vector<std::vector<double>> matrix;
    bool triangular = false;
    double det_numeric = 0;
    double det_closed = 0;
};

// Orientable graphs only.
MasselotteChange masselotte_jacobian(const OrientedGraph& og, double omega);

}  // namespace ncrg
