#include "ncrg/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ncrg/numerics.hpp"

namespace ncrg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

ScaleAttribution ScaleAttribution::from_graph(const RibbonGraph& g, double base) {
    ScaleAttribution mu;
    mu.slice_base = base;
    mu.scale.resize(g.n_edges());
    for (int e = 0; e < g.n_edges(); ++e) mu.scale[e] = g.edges()[e].scale.value_or(0);
    return mu;
}

Regime regime_from_string(const std::string& s) {
    if (s == "commutative") return Regime::Commutative;
    if (s == "phi4_x") return Regime::Phi4X;
    if (s == "gn_x") return Regime::GrossNeveuX;
    if (s == "matrix_phi4") return Regime::MatrixPhi4;
    if (s == "matrix_general") return Regime::MatrixGeneral;
    fail("unknown regime: " + s);
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Commutative: return "commutative";
        case Regime::Phi4X: return "phi4_x";
        case Regime::GrossNeveuX: return "gn_x";
        case Regime::MatrixPhi4: return "matrix_phi4";
        case Regime::MatrixGeneral: return "matrix_general";
    }
    return "?";
}

RibbonGraph subgraph_ribbon(const RibbonGraph& g, const std::vector<int>& edge_subset) {
    std::vector<bool> in_set(g.n_edges(), false);
    for (int e : edge_subset) in_set[e] = true;
    std::vector<bool> vertex_in(g.n_vertices(), false);
    for (int e : edge_subset) {
        vertex_in[g.edges()[e].a.vertex] = true;
        vertex_in[g.edges()[e].b.vertex] = true;
    }
    std::vector<int> vmap(g.n_vertices(), -1);
    std::vector<int> valences;
    for (int v = 0; v < g.n_vertices(); ++v)
        if (vertex_in[v]) {
            vmap[v] = static_cast<int>(valences.size());
            valences.push_back(g.valence(v));
        }
    std::vector<RibbonEdge> edges;
    for (int e = 0; e < g.n_edges(); ++e)
        if (in_set[e]) {
            RibbonEdge ed = g.edges()[e];
            ed.a.vertex = vmap[ed.a.vertex];
            ed.b.vertex = vmap[ed.b.vertex];
            edges.push_back(ed);
        }
    // every slot of a kept vertex not used by a kept edge becomes external
    std::vector<SlotRef> externals;
    for (int v = 0; v < g.n_vertices(); ++v) {
        if (!vertex_in[v]) continue;
        for (int s = 0; s < g.valence(v); ++s) {
            int d = g.dart_id({v, s});
            int e = g.dart_edge(d);
            if (e < 0 || !in_set[e]) externals.push_back({vmap[v], s});
        }
    }
    return RibbonGraph::general(std::move(valences), std::move(edges), std::move(externals));
}

QuasiLocality quasi_locality(const RibbonGraph& g, const ScaleAttribution& mu,
                             const std::vector<int>& edge_subset) {
    std::vector<bool> in_set(g.n_edges(), false);
    for (int e : edge_subset) in_set[e] = true;
    std::vector<bool> vertex_in(g.n_vertices(), false);
    for (int e : edge_subset) {
        vertex_in[g.edges()[e].a.vertex] = true;
        vertex_in[g.edges()[e].b.vertex] = true;
    }
    QuasiLocality q;
    q.i_g = std::numeric_limits<int>::max();
    for (int e : edge_subset) q.i_g = std::min(q.i_g, mu.scale[e]);
    q.e_g = -1;
    for (int e = 0; e < g.n_edges(); ++e) {
        if (in_set[e]) continue;
        if (vertex_in[g.edges()[e].a.vertex] || vertex_in[g.edges()[e].b.vertex])
            q.e_g = std::max(q.e_g, mu.scale[e]);
    }
    q.quasi_local = q.i_g > q.e_g;
    return q;
}

ComponentTree components(const RibbonGraph& g, const ScaleAttribution& mu) {
    if (!g.connected()) fail("components: graph is not connected");
    if (static_cast<int>(mu.scale.size()) != g.n_edges())
        fail("components: attribution size mismatch");
    int max_scale = 0;
    for (int s : mu.scale) max_scale = std::max(max_scale, s);

    std::set<std::vector<int>> seen;
    ComponentTree tree;
    for (int i = 0; i <= max_scale; ++i) {
        // connected components of the subgraph with scales >= i
        std::vector<int> keep;
        for (int e = 0; e < g.n_edges(); ++e)
            if (mu.scale[e] >= i) keep.push_back(e);
        if (keep.empty()) continue;
        // union-find over vertices restricted to kept edges
        std::vector<int> parent(g.n_vertices());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int e : keep) {
            int a = find(g.edges()[e].a.vertex), b = find(g.edges()[e].b.vertex);
            if (a != b) parent[a] = b;
        }
        std::map<int, std::vector<int>> groups;
        for (int e : keep) groups[find(g.edges()[e].a.vertex)].push_back(e);
        for (auto& [rep, subset] : groups) {
            if (!seen.insert(subset).second) continue;
            Component c;
            c.edges = subset;
            QuasiLocality q = quasi_locality(g, mu, subset);
            c.scale = q.i_g;
            c.external_scale = q.e_g;
            RibbonGraph sub = subgraph_ribbon(g, subset);
            Topology t = topology(sub);
            c.n_vertices = t.V;
            c.N = t.n_externals;
            c.genus = t.genus;
            c.broken_faces = t.B;
            c.orientable = is_orientable(sub);
            std::set<int> vs;
            for (int e : subset) {
                vs.insert(g.edges()[e].a.vertex);
                vs.insert(g.edges()[e].b.vertex);
            }
            c.vertices.assign(vs.begin(), vs.end());
            tree.nodes.push_back(std::move(c));
        }
    }
    // inclusion tree: parent = smallest strict superset
    int n = static_cast<int>(tree.nodes.size());
    for (int a = 0; a < n; ++a) {
        int best = -1;
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (tree.nodes[b].edges.size() <= tree.nodes[a].edges.size()) continue;
            if (std::includes(tree.nodes[b].edges.begin(), tree.nodes[b].edges.end(),
                              tree.nodes[a].edges.begin(), tree.nodes[a].edges.end())) {
                if (best < 0 || tree.nodes[b].edges.size() < tree.nodes[best].edges.size())
                    best = b;
            }
        }
        tree.nodes[a].parent = best;
        if (best >= 0) tree.nodes[best].children.push_back(a);
    }
    for (int a = 0; a < n; ++a)
        if (tree.nodes[a].parent < 0) tree.root = a;
    return tree;
}

OmegaVerdict omega_of(const Component& c, Regime regime, const RegimeParams& p,
                      bool critical) {
    OmegaVerdict v;
    v.regime = regime;
    v.critical = critical;
    switch (regime) {
        case Regime::Commutative: {
            int D = p.dimension;
            if (D != 2 && D != 4) fail("omega: commutative regime needs D in {2,4}");
            v.omega = (4 - D) * c.n_vertices + (D - 2) / 2 * c.N - D;
            v.divergent = v.omega <= 0;
            break;
        }
        case Regime::Phi4X: {
            if (!c.orientable)
                v.omega = c.N;
            else if (c.genus >= 1)
                v.omega = c.N + 4;
            else if (c.broken_faces >= 2)
                v.omega = c.N;
            else
                v.omega = c.N - 4;
            v.divergent = v.omega <= 0;
            break;
        }
        case Regime::GrossNeveuX: {
            if (c.genus >= 1)
                v.omega = c.N + 4;
            else if (c.N == 4 && c.broken_faces == 2)
                v.omega = critical ? c.N - 4 : c.N;
            else
                v.omega = c.N - 4;
            v.divergent = v.omega <= 0;
            break;
        }
        case Regime::MatrixPhi4: {
            v.omega = (4 - c.N) - 4 * (2 * c.genus + c.broken_faces - 1);
            v.divergent = v.omega >= 0;
            break;
        }
        case Regime::MatrixGeneral: {
            int D = p.dimension, d0 = p.delta0, d1 = p.delta1;
            if (c.N % 2 != 0) fail("omega: odd external-leg count");
            v.omega = (d0 + d1 - D) * c.n_vertices + (D - d0) * c.N / 2 - (D - d0 + d1) +
                      2 * c.genus * (D - d0 + d1) + D * (c.broken_faces - 1);
            v.divergent = v.omega <= 0;
            break;
        }
    }
    return v;
}

namespace {

// Gross-Neveu critical detection: candidate with N=4, g=0, B=2 whose two
// second-broken-face corners are closed below by an insertion of exactly one
// line, the first two-point component on the path to the root.
bool is_critical(const RibbonGraph& g, const ComponentTree& tree, int node) {
    const Component& c = tree.nodes[node];
    if (!(c.N == 4 && c.genus == 0 && c.broken_faces == 2 && c.orientable)) return false;
    int a = c.parent;
    while (a >= 0 && tree.nodes[a].N != 2) a = tree.nodes[a].parent;
    if (a < 0) return false;
    std::vector<int> extra;
    std::set<int> own(c.edges.begin(), c.edges.end());
    for (int e : tree.nodes[a].edges)
        if (!own.count(e)) extra.push_back(e);
    if (extra.size() != 1) return false;
    // The single insertion line must close two external corners of the
    // candidate lying in one broken face of it.
    RibbonGraph sub = subgraph_ribbon(g, c.edges);
    // map candidate-subgraph externals back to (vertex,slot) of g
    std::vector<int> vmap;  // sub vertex -> g vertex
    {
        std::set<int> vs(c.vertices.begin(), c.vertices.end());
        vmap.assign(vs.begin(), vs.end());
    }
    const RibbonEdge& ins = g.edges()[extra[0]];
    auto faces = trace_faces(sub);
    for (const auto& f : faces) {
        if (!f.broken()) continue;
        bool hit_a = false, hit_b = false;
        for (int xi : f.externals) {
            SlotRef s = sub.externals()[xi];
            SlotRef orig{vmap[s.vertex], s.slot};
            if (orig == ins.a) hit_a = true;
            if (orig == ins.b) hit_b = true;
        }
        if (hit_a && hit_b) return true;
    }
    return false;
}

}  // namespace

std::vector<OmegaVerdict> classify(const RibbonGraph& g, const ScaleAttribution& mu,
                                   ComponentTree& tree, Regime regime,
                                   const RegimeParams& params) {
    (void)mu;
    std::vector<OmegaVerdict> out(tree.nodes.size());
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        const Component& c = tree.nodes[i];
        OmegaVerdict v = omega_of(c, regime, params);
        if (regime == Regime::GrossNeveuX && c.N == 4 && c.genus == 0 &&
            c.broken_faces == 2) {
            v.critical = is_critical(g, tree, static_cast<int>(i));
            v.omega = v.critical ? c.N - 4 : c.N;
            v.divergent = v.omega <= 0;
        }
        out[i] = v;
    }
    return out;
}

ScanReport attribution_scan(const RibbonGraph& g, int i_max, Regime regime,
                            const RegimeParams& params, double slice_base) {
    int I = g.n_edges();
    if (I > 8 || i_max > 8)
        throw std::runtime_error("attribution_scan: budget exceeded (I <= 8, i_max <= 8)");
    double logM = std::log(slice_base);

    ScanReport rep;
    double cumulative = 0;
    long long count = 0;
    for (int top = 0; top <= i_max; ++top) {
        // attributions whose maximum scale is exactly `top`
        std::vector<int> mu_vec(I, 0);
        std::function<void(int, bool)> rec = [&](int pos, bool used_top) {
            if (pos == I) {
                if (!used_top && top > 0) return;
                ScaleAttribution mu;
                mu.scale = mu_vec;
                mu.slice_base = slice_base;
                ComponentTree tree = components(g, mu);
                double log_factor = 0;
                for (const auto& c : tree.nodes) {
                    OmegaVerdict v = omega_of(c, regime, params);
                    int span = c.scale - std::max(c.external_scale, -1);
                    // one factor M^{-omega} per slice at which the component
                    // is quasi-local (it appears once per such i)
                    double conv = (regime == Regime::MatrixPhi4) ? -v.omega : v.omega;
                    log_factor += -conv * span * logM;
                }
                cumulative += std::exp(log_factor);
                ++count;
                return;
            }
            for (int s = 0; s <= top; ++s) {
                mu_vec[pos] = s;
                rec(pos + 1, used_top || s == top);
            }
        };
        rec(0, false);
        rep.rows.push_back({top, cumulative, count});
    }

    // increments and diagnostics
    std::vector<double> xs, ys;
    for (size_t j = 1; j < rep.rows.size(); ++j) {
        xs.push_back(rep.rows[j].i_max);
        ys.push_back(rep.rows[j].partial_sum);
    }
    if (xs.size() >= 2) {
        LineFit affine = fit_line(xs, ys);
        rep.affine_slope = affine.slope;
        rep.affine_r2 = affine.r2;
    }
    std::vector<double> ratios;
    for (size_t j = 2; j < rep.rows.size(); ++j) {
        double d1 = rep.rows[j].partial_sum - rep.rows[j - 1].partial_sum;
        double d0 = rep.rows[j - 1].partial_sum - rep.rows[j - 2].partial_sum;
        if (d0 > 0) ratios.push_back(d1 / d0);
    }
    if (!ratios.empty()) {
        rep.ratio = *std::max_element(ratios.end() - std::min<size_t>(3, ratios.size()),
                                      ratios.end());
        rep.convergent = rep.ratio < 1.0;
    }
    return rep;
}

}  // namespace ncrg
