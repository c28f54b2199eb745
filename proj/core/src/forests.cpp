#include "ncrg/forests.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ncrg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> tmp;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(tmp));
    return tmp.empty();
}

bool connected_edge_set(const RibbonGraph& g, const std::vector<int>& edges) {
    if (edges.empty()) return false;
    std::set<int> verts;
    for (int e : edges) {
        verts.insert(g.edges()[e].a.vertex);
        verts.insert(g.edges()[e].b.vertex);
    }
    std::set<int> seen;
    std::vector<int> stack{g.edges()[edges[0]].a.vertex};
    seen.insert(stack[0]);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int e : edges) {
            const auto& ed = g.edges()[e];
            for (int w : {ed.a.vertex, ed.b.vertex})
                if ((ed.a.vertex == v || ed.b.vertex == v) && !seen.count(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
    }
    return seen.size() == verts.size();
}

}  // namespace

std::vector<Subgraph> divergent_subgraphs(const RibbonGraph& g, DivergenceScope scope) {
    if (!g.connected()) fail("divergent_subgraphs: graph is not connected");
    if (g.n_vertices() > 8)
        throw std::runtime_error("divergent_subgraphs: combinatorial budget exceeded (n > 8)");
    int I = g.n_edges();
    std::vector<Subgraph> out;
    for (unsigned long long mask = 1; mask < (1ull << I); ++mask) {
        std::vector<int> edges;
        for (int e = 0; e < I; ++e)
            if (mask & (1ull << e)) edges.push_back(e);
        std::set<int> verts;
        for (int e : edges) {
            verts.insert(g.edges()[e].a.vertex);
            verts.insert(g.edges()[e].b.vertex);
        }
        int slots = 0;
        for (int v : verts) slots += g.valence(v);
        int N = slots - 2 * static_cast<int>(edges.size());
        bool wanted = (N == 4) || (scope == DivergenceScope::TwoAndFourPoint && N == 2);
        if (!wanted) continue;
        if (!connected_edge_set(g, edges)) continue;
        out.push_back({std::move(edges), N});
    }
    return out;
}

bool is_forest(const std::vector<Subgraph>& substrate, const Forest& f) {
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j) {
            const auto& a = substrate[f[i]].edges;
            const auto& b = substrate[f[j]].edges;
            if (!subset_of(a, b) && !subset_of(b, a) && !disjoint(a, b)) return false;
        }
    return true;
}

std::vector<Forest> all_forests(const std::vector<Subgraph>& substrate) {
    int n = static_cast<int>(substrate.size());
    std::vector<Forest> out;
    Forest cur;
    // backtracking over substrate indices in order
    std::function<void(int)> rec = [&](int next) {
        out.push_back(cur);
        for (int i = next; i < n; ++i) {
            bool ok = true;
            for (int j : cur) {
                const auto& a = substrate[i].edges;
                const auto& b = substrate[j].edges;
                if (!subset_of(a, b) && !subset_of(b, a) && !disjoint(a, b)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

RelativeIndices relative_indices(const RibbonGraph& g, const ScaleAttribution& mu,
                                 const std::vector<Subgraph>& substrate, const Forest& f,
                                 int member) {
    const auto& ge = substrate[member].edges;
    // children union A_F(g): edges of forest members strictly inside g
    std::set<int> children_edges;
    for (int j : f) {
        if (j == member) continue;
        const auto& o = substrate[j].edges;
        if (o.size() < ge.size() && subset_of(o, ge))
            children_edges.insert(o.begin(), o.end());
    }
    // ancestor B_F(g): smallest member strictly containing g, else the whole graph
    int ancestor = -1;
    for (int j : f) {
        if (j == member) continue;
        const auto& o = substrate[j].edges;
        if (o.size() > ge.size() && subset_of(ge, o))
            if (ancestor < 0 || o.size() < substrate[ancestor].edges.size()) ancestor = j;
    }

    RelativeIndices r;
    // min over an empty reduced line set is +infinity: a fully reduced
    // member is trivially quasi-local
    r.i_g = std::numeric_limits<int>::max();
    for (int e : ge)
        if (!children_edges.count(e)) r.i_g = std::min(r.i_g, mu.scale[e]);

    // external lines of g restricted to the ancestor; true externals give -1
    std::set<int> in_g(ge.begin(), ge.end());
    std::set<int> verts;
    for (int e : ge) {
        verts.insert(g.edges()[e].a.vertex);
        verts.insert(g.edges()[e].b.vertex);
    }
    r.e_g = -1;
    for (int e = 0; e < g.n_edges(); ++e) {
        if (in_g.count(e)) continue;
        bool touches = verts.count(g.edges()[e].a.vertex) || verts.count(g.edges()[e].b.vertex);
        if (!touches) continue;
        if (ancestor >= 0) {
            const auto& anc = substrate[ancestor].edges;
            if (!std::binary_search(anc.begin(), anc.end(), e)) continue;
        }
        r.e_g = std::max(r.e_g, mu.scale[e]);
    }
    return r;
}

ForestSplit classify_forest(const RibbonGraph& g, const ScaleAttribution& mu,
                            const std::vector<Subgraph>& substrate, const Forest& f) {
    if (!is_forest(substrate, f)) fail("classify_forest: input is not a forest");
    // Members are classified from the innermost outward and only inoffensive
    // children are reduced away. A member fully covered by its reduced
    // children has no internal line left and is trivially dangerous. This is
    // the self-consistent reading of the relative indices: the dangerous
    // status of a member then depends only on the inoffensive part of the
    // forest, which is what makes T idempotent on chains of bubbles.
    Forest order = f;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return substrate[a].edges.size() < substrate[b].edges.size();
    });
    std::set<int> dangerous;
    for (int m : order) {
        const auto& ge = substrate[m].edges;
        std::set<int> reduced;
        for (int j : f) {
            if (j == m || dangerous.count(j)) continue;
            const auto& o = substrate[j].edges;
            if (o.size() < ge.size() && subset_of(o, ge)) reduced.insert(o.begin(), o.end());
        }
        int i_g = std::numeric_limits<int>::max();
        for (int e : ge)
            if (!reduced.count(e)) i_g = std::min(i_g, mu.scale[e]);

        int ancestor = -1;
        for (int j : f) {
            if (j == m) continue;
            const auto& o = substrate[j].edges;
            if (o.size() > ge.size() && subset_of(ge, o))
                if (ancestor < 0 || o.size() < substrate[ancestor].edges.size()) ancestor = j;
        }
        std::set<int> in_g(ge.begin(), ge.end());
        std::set<int> verts;
        for (int e : ge) {
            verts.insert(g.edges()[e].a.vertex);
            verts.insert(g.edges()[e].b.vertex);
        }
        int e_g = -1;
        for (int e = 0; e < g.n_edges(); ++e) {
            if (in_g.count(e)) continue;
            if (!verts.count(g.edges()[e].a.vertex) && !verts.count(g.edges()[e].b.vertex))
                continue;
            if (ancestor >= 0) {
                const auto& anc = substrate[ancestor].edges;
                if (!std::binary_search(anc.begin(), anc.end(), e)) continue;
            }
            e_g = std::max(e_g, mu.scale[e]);
        }
        if (i_g > e_g) dangerous.insert(m);
    }
    ForestSplit split;
    for (int m : f)
        (dangerous.count(m) ? split.dangerous : split.inoffensive).push_back(m);
    return split;
}

Forest t_mu(const RibbonGraph& g, const ScaleAttribution& mu,
            const std::vector<Subgraph>& substrate, const Forest& f) {
    return classify_forest(g, mu, substrate, f).inoffensive;
}

Forest completion(const RibbonGraph& g, const ScaleAttribution& mu,
                  const std::vector<Subgraph>& substrate, const Forest& f) {
    Forest t = t_mu(g, mu, substrate, f);
    if (t != f) fail("completion: input forest is not inoffensive-closed");
    Forest h;
    for (int s = 0; s < static_cast<int>(substrate.size()); ++s) {
        if (std::find(f.begin(), f.end(), s) != f.end()) continue;
        Forest fs = f;
        fs.push_back(s);
        std::sort(fs.begin(), fs.end());
        if (!is_forest(substrate, fs)) continue;
        ForestSplit split = classify_forest(g, mu, substrate, fs);
        if (std::find(split.dangerous.begin(), split.dangerous.end(), s) !=
            split.dangerous.end())
            h.push_back(s);
    }
    return h;
}

}  // namespace ncrg
