#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncrg {

// A slot on a vertex. Vertices carry cyclically ordered slots; for the quartic
// models every vertex has exactly four.
struct SlotRef {
    int vertex = -1;
    int slot = -1;
    bool operator==(const SlotRef&) const = default;
};

struct RibbonEdge {
    SlotRef a, b;
    std::optional<int> scale;
};

enum class FieldKind { None, Psi, PsiBar };

// Ribbon (fat) graph: vertices with cyclically ordered slots, each slot
// occupied by exactly one internal edge end or one external leg.
class RibbonGraph {
  public:
    // Quartic-vertex graph (the model input); validates slot occupancy and
    // 4*V = 2*I + N.
    static RibbonGraph quartic(int n_vertices, std::vector<RibbonEdge> edges,
                               std::vector<SlotRef> externals);
    // Arbitrary valences (duals, subgraphs).
    static RibbonGraph general(std::vector<int> valences, std::vector<RibbonEdge> edges,
                               std::vector<SlotRef> externals);

    int n_vertices() const { return static_cast<int>(valence_.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    int n_externals() const { return static_cast<int>(externals_.size()); }
    int valence(int v) const { return valence_[v]; }
    const std::vector<RibbonEdge>& edges() const { return edges_; }
    const std::vector<SlotRef>& externals() const { return externals_; }

    // Dart = (vertex, slot) flattened; darts of internal edges are paired.
    int dart_count() const { return static_cast<int>(dart_owner_.size()); }
    int dart_id(const SlotRef& s) const { return dart_offset_[s.vertex] + s.slot; }
    SlotRef dart_ref(int d) const;
    // -1 for externals, else the paired dart.
    int dart_partner(int d) const { return dart_partner_[d]; }
    // Edge owning a dart, -1 for externals.
    int dart_edge(int d) const { return dart_owner_[d]; }
    int next_slot_ccw(int d) const;
    int next_slot_cw(int d) const;

    bool connected() const;

    // Per-slot field labels (Gross-Neveu inputs); empty when unused.
    void set_fields(std::vector<std::vector<FieldKind>> fields);
    FieldKind field(const SlotRef& s) const;
    bool has_fields() const { return !fields_.empty(); }

    RibbonGraph() = default;  // empty graph

  private:
    void build_index();

    std::vector<int> valence_;
    std::vector<int> dart_offset_;
    std::vector<RibbonEdge> edges_;
    std::vector<SlotRef> externals_;
    std::vector<int> dart_partner_;
    std::vector<int> dart_owner_;
    std::vector<int> dart_external_;  // external index or -1
    std::vector<std::vector<FieldKind>> fields_;
};

struct Topology {
    int V = 0, I = 0, F = 0, B = 0, genus = 0, chi = 0;
    int n_externals = 0;
};

struct Face {
    std::vector<int> darts;      // internal darts on the boundary walk
    std::vector<int> externals;  // external indices met along the walk
    bool broken() const { return !externals.empty(); }
};

std::vector<Face> trace_faces(const RibbonGraph& g);
Topology topology(const RibbonGraph& g);

// Faces <-> vertices exchange; externals become legs of the face-vertex that
// carried them (the "marked point"). Genus and I are preserved.
RibbonGraph dual(const RibbonGraph& g);

// Is there a vertex-sign assignment (alternating per slot) making every edge
// join a + corner to a - corner?
bool is_orientable(const RibbonGraph& g);

enum class LineClass { Tree, Loop0, LoopPlus, LoopMinus };
enum class WalkDirection { CounterClockwise, Clockwise };

// Ribbon graph with root, corner signs, total corner order and line classes.
struct OrientedGraph {
    RibbonGraph graph;
    std::vector<int> tree;  // edge ids
    SlotRef root;
    WalkDirection direction = WalkDirection::CounterClockwise;

    std::vector<int> corner_sign;           // per dart, +1 / -1
    std::vector<int> position;              // per dart, 1..#darts in walk order
    std::vector<int> order;                 // position-1 -> dart
    std::vector<LineClass> line_class;      // per edge
    std::vector<int> eps;                   // epsilon(l) per edge (corner-order sign)
    std::vector<int> eps_field;             // field-orientation sign; = eps when real
    std::vector<std::pair<int, int>> pos;   // per edge, position pair (i < j)
    std::vector<int> ext_position;          // per external, its position
    std::vector<bool> in_tree;              // per edge

    bool orientable() const;
    int n_vertices() const { return graph.n_vertices(); }
    // Position parity sign (+1 at odd positions).
    static int position_sign(int p) { return (p % 2 == 1) ? 1 : -1; }
};

// Default root: lowest-id vertex carrying an external leg, lowest external
// slot there; falls back to (0,0) for vacuum graphs.
SlotRef default_root(const RibbonGraph& g);

OrientedGraph orient(const RibbonGraph& g, std::vector<int> tree, SlotRef root,
                     WalkDirection direction = WalkDirection::CounterClockwise);

enum class Relation { Before, After, Inside, Contains, CrossLeft, CrossRight, None };

// Relation between two lines of an oriented graph (irreflexive).
Relation line_relation(const OrientedGraph& og, int edge_a, int edge_b);
// Relation of a line to a corner position: Before / After / Contains
// ("l contracts above the position") / None.
Relation line_position_relation(const OrientedGraph& og, int edge, int position);

struct RelationTable {
    std::vector<std::vector<Relation>> line_line;  // edge x edge
    std::vector<std::vector<Relation>> line_ext;   // edge x external
};
RelationTable line_relations(const OrientedGraph& og);

// Branch system of the spanning tree: everything strictly above a tree line.
struct Branch {
    int tree_edge = -1;
    std::vector<int> vertices;        // b(l)
    std::vector<int> interior_edges;  // lines with both ends in b(l)
    // Boundary items X(l): (position, eta) of external corners of the branch
    // plus endpoints of lines crossing its boundary.
    std::vector<std::pair<int, int>> boundary;
    int distinguished_position = -1;  // e_l, the endpoint of l inside the branch
};

std::vector<Branch> branches(const OrientedGraph& og);

enum class TreeMode { Maximize, Minimize };

// Greedy Kruskal by scale with ascending-edge-id tie break. Maximize picks
// highest scales first (x-space optimization), Minimize lowest first
// (matrix-base optimization). Edges without a scale count as scale 0.
std::vector<int> spanning_tree(const RibbonGraph& g, TreeMode mode);

// Any spanning tree (lexicographically first by edge id).
std::vector<int> any_spanning_tree(const RibbonGraph& g);

}  // namespace ncrg
