#include "ncrg/ribbon.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ncrg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

RibbonGraph RibbonGraph::quartic(int n_vertices, std::vector<RibbonEdge> edges,
                                 std::vector<SlotRef> externals) {
    return general(std::vector<int>(n_vertices, 4), std::move(edges), std::move(externals));
}

RibbonGraph RibbonGraph::general(std::vector<int> valences, std::vector<RibbonEdge> edges,
                                 std::vector<SlotRef> externals) {
    RibbonGraph g;
    g.valence_ = std::move(valences);
    g.edges_ = std::move(edges);
    g.externals_ = std::move(externals);
    g.build_index();
    return g;
}

void RibbonGraph::build_index() {
    int n = n_vertices();
    dart_offset_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) {
        if (valence_[v] <= 0) fail("vertex " + std::to_string(v) + " has no slots");
        dart_offset_[v + 1] = dart_offset_[v] + valence_[v];
    }
    int darts = dart_offset_[n];
    dart_partner_.assign(darts, -1);
    dart_owner_.assign(darts, -1);
    dart_external_.assign(darts, -1);
    std::vector<bool> used(darts, false);

    auto check = [&](const SlotRef& s, const char* what) {
        if (s.vertex < 0 || s.vertex >= n)
            fail(std::string(what) + ": vertex index out of range");
        if (s.slot < 0 || s.slot >= valence_[s.vertex])
            fail(std::string(what) + ": slot index outside 0.." +
                 std::to_string(valence_[s.vertex] - 1) + " at vertex " +
                 std::to_string(s.vertex));
        int d = dart_offset_[s.vertex] + s.slot;
        if (used[d])
            fail(std::string(what) + ": slot occupied (vertex " + std::to_string(s.vertex) +
                 ", slot " + std::to_string(s.slot) + ")");
        used[d] = true;
        return d;
    };

    for (size_t e = 0; e < edges_.size(); ++e) {
        int da = check(edges_[e].a, "edge");
        int db = check(edges_[e].b, "edge");
        dart_partner_[da] = db;
        dart_partner_[db] = da;
        dart_owner_[da] = dart_owner_[db] = static_cast<int>(e);
    }
    for (size_t x = 0; x < externals_.size(); ++x) {
        int d = check(externals_[x], "external");
        dart_external_[d] = static_cast<int>(x);
    }
    for (int d = 0; d < darts; ++d)
        if (!used[d]) {
            SlotRef s = dart_ref(d);
            fail("dangling slot (vertex " + std::to_string(s.vertex) + ", slot " +
                 std::to_string(s.slot) + ")");
        }
}

SlotRef RibbonGraph::dart_ref(int d) const {
    int v = 0;
    while (dart_offset_[v + 1] <= d) ++v;
    return {v, d - dart_offset_[v]};
}

int RibbonGraph::next_slot_ccw(int d) const {
    SlotRef s = dart_ref(d);
    return dart_offset_[s.vertex] + (s.slot + 1) % valence_[s.vertex];
}

int RibbonGraph::next_slot_cw(int d) const {
    SlotRef s = dart_ref(d);
    return dart_offset_[s.vertex] + (s.slot + valence_[s.vertex] - 1) % valence_[s.vertex];
}

bool RibbonGraph::connected() const {
    int n = n_vertices();
    if (n <= 1) return true;
    UnionFind uf(n);
    int comps = n;
    for (const auto& e : edges_)
        if (uf.unite(e.a.vertex, e.b.vertex)) --comps;
    return comps == 1;
}

void RibbonGraph::set_fields(std::vector<std::vector<FieldKind>> fields) {
    if (static_cast<int>(fields.size()) != n_vertices())
        fail("fields: one slot list per vertex required");
    for (int v = 0; v < n_vertices(); ++v)
        if (static_cast<int>(fields[v].size()) != valence_[v])
            fail("fields: wrong slot count at vertex " + std::to_string(v));
    fields_ = std::move(fields);
}

FieldKind RibbonGraph::field(const SlotRef& s) const {
    if (fields_.empty()) return FieldKind::None;
    return fields_[s.vertex][s.slot];
}

std::vector<Face> trace_faces(const RibbonGraph& g) {
    std::vector<Face> faces;
    int darts = g.dart_count();
    std::vector<bool> visited(darts, false);
    // Walk rule: from an internal dart, flip to the partner, then rotate
    // counterclockwise; external legs met while rotating are recorded on the
    // current face and skipped (legs break but do not split a face).
    for (int d0 = 0; d0 < darts; ++d0) {
        if (g.dart_edge(d0) < 0 || visited[d0]) continue;
        Face f;
        int d = d0;
        do {
            visited[d] = true;
            f.darts.push_back(d);
            int cur = g.next_slot_ccw(g.dart_partner(d));
            while (g.dart_edge(cur) < 0) {
                SlotRef s = g.dart_ref(cur);
                // record the external leg sitting in this corner
                for (size_t x = 0; x < g.externals().size(); ++x)
                    if (g.externals()[x] == s) f.externals.push_back(static_cast<int>(x));
                cur = g.next_slot_ccw(cur);
            }
            d = cur;
        } while (d != d0);
        faces.push_back(std::move(f));
    }
    if (g.n_edges() == 0) {
        // Bare vertex: a single (broken, if legs exist) face.
        Face f;
        for (size_t x = 0; x < g.externals().size(); ++x)
            f.externals.push_back(static_cast<int>(x));
        faces.push_back(std::move(f));
    }
    return faces;
}

Topology topology(const RibbonGraph& g) {
    if (!g.connected()) fail("topology: graph is not connected");
    auto faces = trace_faces(g);
    Topology t;
    t.V = g.n_vertices();
    t.I = g.n_edges();
    t.F = static_cast<int>(faces.size());
    t.B = static_cast<int>(std::count_if(faces.begin(), faces.end(),
                                         [](const Face& f) { return f.broken(); }));
    t.chi = t.V - t.I + t.F;
    if ((2 - t.chi) % 2 != 0) fail("topology: non-integer genus (invalid rotation system)");
    t.genus = (2 - t.chi) / 2;
    t.n_externals = g.n_externals();
    return t;
}

RibbonGraph dual(const RibbonGraph& g) {
    if (!g.connected()) fail("dual: graph is not connected");
    auto faces = trace_faces(g);
    int nf = static_cast<int>(faces.size());

    // The cyclic order of corners around a dual vertex is the boundary-walk
    // order of the face: internal darts become dual edge ends, externals
    // become dual externals ("marked points" keep their legs).
    std::vector<int> face_of_dart(g.dart_count(), -1);
    std::vector<int> slot_of_dart(g.dart_count(), -1);
    std::vector<int> valences(nf, 0);
    std::vector<std::vector<std::pair<bool, int>>> corner_items(nf);  // (is_edge, dart/ext)

    for (int fi = 0; fi < nf; ++fi) {
        // Interleave darts and the externals collected between them in walk order.
        const Face& f = faces[fi];
        // Re-walk to get the exact interleaving.
        if (f.darts.empty()) {
            for (int x : f.externals) corner_items[fi].push_back({false, x});
        } else {
            int d0 = f.darts.front();
            int d = d0;
            do {
                corner_items[fi].push_back({true, d});
                int cur = g.next_slot_ccw(g.dart_partner(d));
                while (g.dart_edge(cur) < 0) {
                    SlotRef s = g.dart_ref(cur);
                    for (size_t x = 0; x < g.externals().size(); ++x)
                        if (g.externals()[x] == s)
                            corner_items[fi].push_back({false, static_cast<int>(x)});
                    cur = g.next_slot_ccw(cur);
                }
                d = cur;
            } while (d != d0);
        }
        valences[fi] = static_cast<int>(corner_items[fi].size());
        int slot = 0;
        for (auto& [is_edge, id] : corner_items[fi]) {
            if (is_edge) {
                face_of_dart[id] = fi;
                slot_of_dart[id] = slot;
            }
            ++slot;
        }
    }

    std::vector<RibbonEdge> dual_edges;
    dual_edges.reserve(g.n_edges());
    for (int e = 0; e < g.n_edges(); ++e) {
        const auto& edge = g.edges()[e];
        int da = g.dart_id(edge.a), db = g.dart_id(edge.b);
        RibbonEdge de;
        de.a = {face_of_dart[da], slot_of_dart[da]};
        de.b = {face_of_dart[db], slot_of_dart[db]};
        de.scale = edge.scale;
        dual_edges.push_back(de);
    }
    std::vector<SlotRef> dual_externals;
    for (int fi = 0; fi < nf; ++fi) {
        int slot = 0;
        for (auto& [is_edge, id] : corner_items[fi]) {
            if (!is_edge) dual_externals.push_back({fi, slot});
            ++slot;
        }
    }
    return RibbonGraph::general(std::move(valences), std::move(dual_edges),
                                std::move(dual_externals));
}

bool is_orientable(const RibbonGraph& g) {
    // Look for sigma(v) in {0,1} with sigma(v1)+s1 != sigma(v2)+s2 (mod 2) on
    // every edge, i.e. each edge joins opposite corner signs.
    int n = g.n_vertices();
    std::vector<int> sigma(n, -1);
    for (int start = 0; start < n; ++start) {
        if (sigma[start] >= 0) continue;
        sigma[start] = 0;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& e : g.edges()) {
                int va = e.a.vertex, vb = e.b.vertex;
                if (va != v && vb != v) continue;
                // parity constraint: sigma[va]+sa+sigma[vb]+sb must be odd
                int need = (e.a.slot + e.b.slot + 1) & 1;
                if (sigma[va] >= 0 && sigma[vb] >= 0) {
                    if (((sigma[va] + sigma[vb]) & 1) != need) return false;
                } else if (sigma[va] >= 0) {
                    sigma[vb] = (need + sigma[va]) & 1;
                    stack.push_back(vb);
                } else if (sigma[vb] >= 0) {
                    sigma[va] = (need + sigma[vb]) & 1;
                    stack.push_back(va);
                }
            }
        }
    }
    return true;
}

SlotRef default_root(const RibbonGraph& g) {
    SlotRef best{-1, -1};
    for (const auto& x : g.externals()) {
        if (best.vertex < 0 || x.vertex < best.vertex ||
            (x.vertex == best.vertex && x.slot < best.slot))
            best = x;
    }
    if (best.vertex < 0) best = {0, 0};
    return best;
}

bool OrientedGraph::orientable() const {
    for (auto c : line_class)
        if (c == LineClass::LoopPlus || c == LineClass::LoopMinus) return false;
    return true;
}

OrientedGraph orient(const RibbonGraph& g, std::vector<int> tree, SlotRef root,
                     WalkDirection direction) {
    if (!g.connected()) fail("orient: graph is not connected");
    int n = g.n_vertices();
    if (static_cast<int>(tree.size()) != n - 1) fail("orient: tree is not spanning");
    {
        UnionFind uf(n);
        for (int e : tree) {
            if (e < 0 || e >= g.n_edges()) fail("orient: bad tree edge id");
            if (!uf.unite(g.edges()[e].a.vertex, g.edges()[e].b.vertex))
                fail("orient: tree contains a cycle");
        }
    }

    OrientedGraph og;
    og.graph = g;
    og.tree = tree;
    og.root = root;
    og.direction = direction;
    og.in_tree.assign(g.n_edges(), false);
    for (int e : tree) og.in_tree[e] = true;

    // Corner signs: root corner is +, signs alternate per slot, tree lines
    // join + to -.
    std::vector<int> sigma(n, 0);  // sign of slot 0 at each vertex, +1/-1, 0 = unset
    auto sign_of = [&](const SlotRef& s) { return sigma[s.vertex] * ((s.slot % 2) ? -1 : 1); };
    sigma[root.vertex] = (root.slot % 2) ? -1 : 1;  // makes sign(root) = +1
    {
        std::vector<std::vector<std::pair<int, int>>> adj(n);  // (tree edge, other vertex)
        for (int e : tree) {
            adj[g.edges()[e].a.vertex].push_back({e, g.edges()[e].b.vertex});
            adj[g.edges()[e].b.vertex].push_back({e, g.edges()[e].a.vertex});
        }
        std::vector<int> stack{root.vertex};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [e, w] : adj[v]) {
                if (sigma[w] != 0) continue;
                const auto& ed = g.edges()[e];
                SlotRef sv = (ed.a.vertex == v) ? ed.a : ed.b;
                SlotRef sw = (ed.a.vertex == v) ? ed.b : ed.a;
                int want = -sign_of(sv);  // tree line joins + to -
                sigma[w] = want * ((sw.slot % 2) ? -1 : 1);
                stack.push_back(w);
            }
        }
    }
    og.corner_sign.assign(g.dart_count(), 0);
    for (int d = 0; d < g.dart_count(); ++d) og.corner_sign[d] = sign_of(g.dart_ref(d));

    // Total corner order: contour walk around the fat tree starting at the
    // root corner. Number a corner when passing it; at a tree slot, cross,
    // number the far corner, and continue around the far vertex.
    og.position.assign(g.dart_count(), 0);
    og.order.clear();
    og.order.reserve(g.dart_count());
    auto number = [&](int d) {
        og.order.push_back(d);
        og.position[d] = static_cast<int>(og.order.size());
    };
    auto is_tree_dart = [&](int d) { return g.dart_edge(d) >= 0 && og.in_tree[g.dart_edge(d)]; };
    auto advance = [&](int vertex, int slot, int k) {
        return (slot + k) % g.valence(vertex);
    };
    struct Frame {
        int vertex;
        int entry_slot;
        int k;  // slots advanced so far around this vertex
    };
    std::vector<Frame> stack;
    int root_dart = g.dart_id(root);
    number(root_dart);
    stack.push_back({root.vertex, root.slot, 0});
    if (is_tree_dart(root_dart)) {
        int p = g.dart_partner(root_dart);
        number(p);
        SlotRef pr = g.dart_ref(p);
        stack.push_back({pr.vertex, pr.slot, 0});
    }
    while (!stack.empty()) {
        Frame& f = stack.back();
        ++f.k;
        if (f.k >= g.valence(f.vertex)) {
            stack.pop_back();
            continue;
        }
        int dart = g.dart_id({f.vertex, advance(f.vertex, f.entry_slot, f.k)});
        number(dart);
        if (is_tree_dart(dart)) {
            int p = g.dart_partner(dart);
            number(p);
            SlotRef pr = g.dart_ref(p);
            stack.push_back({pr.vertex, pr.slot, 0});
        }
    }
    if (static_cast<int>(og.order.size()) != g.dart_count())
        fail("orient: internal error, contour walk did not cover all corners");
    if (direction == WalkDirection::Clockwise) {
        // The clockwise contour is the counterclockwise one traversed
        // backwards, anchored at the root corner.
        int total = g.dart_count();
        for (int d = 0; d < total; ++d)
            if (og.position[d] != 1) og.position[d] = total + 2 - og.position[d];
        og.order.assign(total, -1);
        for (int d = 0; d < total; ++d) og.order[og.position[d] - 1] = d;
    }

    // Line classes, signs, position pairs.
    int ne = g.n_edges();
    og.line_class.assign(ne, LineClass::Loop0);
    og.eps.assign(ne, 0);
    og.eps_field.assign(ne, 0);
    og.pos.assign(ne, {0, 0});
    for (int e = 0; e < ne; ++e) {
        const auto& ed = g.edges()[e];
        int da = g.dart_id(ed.a), db = g.dart_id(ed.b);
        int pa = og.position[da], pb = og.position[db];
        if (pa > pb) std::swap(pa, pb), std::swap(da, db);
        og.pos[e] = {pa, pb};
        int sa = og.corner_sign[da], sb = og.corner_sign[db];
        if (og.in_tree[e]) {
            og.line_class[e] = LineClass::Tree;
            if (sa * sb != -1) fail("orient: internal error, tree line not (+,-)");
        } else if (sa * sb == -1) {
            og.line_class[e] = LineClass::Loop0;
        } else if (sa == 1) {
            og.line_class[e] = LineClass::LoopPlus;
        } else {
            og.line_class[e] = LineClass::LoopMinus;
        }
        switch (og.line_class[e]) {
            case LineClass::Tree:
            case LineClass::Loop0:
                og.eps[e] = (pa % 2 == 0) ? 1 : -1;
                break;
            case LineClass::LoopPlus:
                og.eps[e] = -1;
                break;
            case LineClass::LoopMinus:
                og.eps[e] = 1;
                break;
        }
        // Field-orientation sign: +1 if the line leaves a psi at its first
        // corner; equals eps for real fields on orientable lines.
        FieldKind fa = g.field(g.dart_ref(da));
        if (fa == FieldKind::Psi)
            og.eps_field[e] = 1;
        else if (fa == FieldKind::PsiBar)
            og.eps_field[e] = -1;
        else
            og.eps_field[e] = og.eps[e];
    }
    og.ext_position.assign(g.n_externals(), 0);
    for (int x = 0; x < g.n_externals(); ++x)
        og.ext_position[x] = og.position[g.dart_id(g.externals()[x])];
    return og;
}

Relation line_relation(const OrientedGraph& og, int ea, int eb) {
    if (ea == eb) return Relation::None;
    auto [i, j] = og.pos[ea];
    auto [p, q] = og.pos[eb];
    if (j < p) return Relation::Before;
    if (q < i) return Relation::After;
    if (p < i && j < q) return Relation::Inside;
    if (i < p && q < j) return Relation::Contains;
    if (i < p && p < j && j < q) return Relation::CrossLeft;
    if (p < i && i < q && q < j) return Relation::CrossRight;
    return Relation::None;
}

Relation line_position_relation(const OrientedGraph& og, int edge, int k) {
    auto [i, j] = og.pos[edge];
    if (j < k) return Relation::Before;
    if (k < i) return Relation::After;
    if (i < k && k < j) return Relation::Contains;
    return Relation::None;
}

RelationTable line_relations(const OrientedGraph& og) {
    RelationTable t;
    int ne = og.graph.n_edges(), nx = og.graph.n_externals();
    t.line_line.assign(ne, std::vector<Relation>(ne, Relation::None));
    t.line_ext.assign(ne, std::vector<Relation>(nx, Relation::None));
    for (int a = 0; a < ne; ++a) {
        for (int b = 0; b < ne; ++b) t.line_line[a][b] = line_relation(og, a, b);
        for (int x = 0; x < nx; ++x)
            t.line_ext[a][x] = line_position_relation(og, a, og.ext_position[x]);
    }
    return t;
}

std::vector<Branch> branches(const OrientedGraph& og) {
    const RibbonGraph& g = og.graph;
    int n = g.n_vertices();
    // Rooted tree structure: parent tree edge per vertex.
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int e : og.tree) {
        adj[g.edges()[e].a.vertex].push_back({e, g.edges()[e].b.vertex});
        adj[g.edges()[e].b.vertex].push_back({e, g.edges()[e].a.vertex});
    }
    std::vector<int> parent_edge(n, -1), parent(n, -1), depth(n, 0), bfs;
    bfs.push_back(og.root.vertex);
    std::vector<bool> seen(n, false);
    seen[og.root.vertex] = true;
    for (size_t h = 0; h < bfs.size(); ++h) {
        int v = bfs[h];
        for (auto [e, w] : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                parent_edge[w] = e;
                parent[w] = v;
                depth[w] = depth[v] + 1;
                bfs.push_back(w);
            }
    }

    std::vector<Branch> out;
    for (int e : og.tree) {
        Branch b;
        b.tree_edge = e;
        // upper vertex of e: the endpoint whose parent edge is e
        const auto& ed = g.edges()[e];
        int upper = (parent_edge[ed.a.vertex] == e) ? ed.a.vertex : ed.b.vertex;
        // b(l) = vertices whose root path uses e = subtree above `upper`
        std::vector<bool> in(n, false);
        std::vector<int> stack{upper};
        in[upper] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            b.vertices.push_back(v);
            for (auto [te, w] : adj[v])
                if (te != e && !in[w]) {
                    in[w] = true;
                    stack.push_back(w);
                }
        }
        std::sort(b.vertices.begin(), b.vertices.end());
        for (int e2 = 0; e2 < g.n_edges(); ++e2) {
            const auto& d2 = g.edges()[e2];
            bool ia = in[d2.a.vertex], ib = in[d2.b.vertex];
            if (e2 != e && ia && ib) b.interior_edges.push_back(e2);
            if (ia != ib && e2 != e) {
                // crossing line: inside endpoint belongs to X(l)
                const SlotRef& s = ia ? d2.a : d2.b;
                int d = g.dart_id(s);
                b.boundary.push_back({og.position[d], og.corner_sign[d]});
            }
        }
        // true externals of the branch
        for (int x = 0; x < g.n_externals(); ++x)
            if (in[g.externals()[x].vertex]) {
                int d = g.dart_id(g.externals()[x]);
                b.boundary.push_back({og.position[d], og.corner_sign[d]});
            }
        // endpoint of e inside the branch
        {
            const SlotRef& s = in[ed.a.vertex] ? ed.a : ed.b;
            int d = g.dart_id(s);
            b.distinguished_position = og.position[d];
            b.boundary.push_back({og.position[d], og.corner_sign[d]});
        }
        std::sort(b.boundary.begin(), b.boundary.end());
        out.push_back(std::move(b));
    }
    return out;
}

namespace {

std::vector<int> kruskal(const RibbonGraph& g, const std::vector<int>& order) {
    if (!g.connected()) fail("spanning_tree: graph is not connected");
    UnionFind uf(g.n_vertices());
    std::vector<int> tree;
    for (int e : order)
        if (uf.unite(g.edges()[e].a.vertex, g.edges()[e].b.vertex)) tree.push_back(e);
    std::sort(tree.begin(), tree.end());
    return tree;
}

}  // namespace

std::vector<int> spanning_tree(const RibbonGraph& g, TreeMode mode) {
    std::vector<int> order(g.n_edges());
    std::iota(order.begin(), order.end(), 0);
    auto scale = [&](int e) { return g.edges()[e].scale.value_or(0); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scale(a) != scale(b))
            return mode == TreeMode::Maximize ? scale(a) > scale(b) : scale(a) < scale(b);
        return a < b;
    });
    return kruskal(g, order);
}

std::vector<int> any_spanning_tree(const RibbonGraph& g) {
    std::vector<int> order(g.n_edges());
    std::iota(order.begin(), order.end(), 0);
    return kruskal(g, order);
}

}  // namespace ncrg
