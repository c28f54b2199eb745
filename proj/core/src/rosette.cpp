#include "ncrg/rosette.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ncrg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

bool in_class(const OrientedGraph& og, int e, LineClass c) { return og.line_class[e] == c; }

bool alternating(const OrientedGraph& og, int e) {
    return og.line_class[e] == LineClass::Tree || og.line_class[e] == LineClass::Loop0;
}

bool is_loop(const OrientedGraph& og, int e) { return og.line_class[e] != LineClass::Tree; }

// eta of the external with index k.
long long eta_ext(const OrientedGraph& og, int k) {
    return OrientedGraph::position_sign(og.ext_position[k]);
}

void add(std::vector<PhaseTerm>& out, Var a, Var b, long long half) {
    if (half != 0) out.push_back({a, b, half});
}

}  // namespace

namespace {

// One summand of a signed corner combination, coefficient in full units.
struct ComboTerm {
    Var v;
    long long c;
};
using Combo = std::vector<ComboTerm>;

// Per line l with corners at positions i < j and parity signs s_i, s_j:
//   alpha = s_i x_i + s_j x_j,   beta = s_i x_i - s_j x_j.
// In line variables: alpha = u, beta = -eps*v(w) for alternating lines;
// alpha = -eps*w, beta = u for the (+,+)/(-,-) classes.
Combo alpha_of(const OrientedGraph& og, int e) {
    if (alternating(og, e)) return {{{VarKind::U, e}, 1}};
    return {{{VarKind::W, e}, -og.eps[e]}};
}

Combo beta_of(const OrientedGraph& og, int e) {
    if (og.line_class[e] == LineClass::Tree) return {{{VarKind::V, e}, -og.eps[e]}};
    if (og.line_class[e] == LineClass::Loop0) return {{{VarKind::W, e}, -og.eps[e]}};
    return {{{VarKind::U, e}, 1}};
}

Combo combo_add(const Combo& a, const Combo& b, long long sb) {
    Combo out = a;
    for (auto t : b) {
        t.c *= sb;
        out.push_back(t);
    }
    return out;
}

// Emit pref_half/2 * (A wedge B).
void emit(std::vector<PhaseTerm>& out, const Combo& A, const Combo& B, long long pref_half) {
    for (const auto& ta : A)
        for (const auto& tb : B) add(out, ta.v, tb.v, pref_half * ta.c * tb.c);
}

// The totally reduced vertex oscillation of a set of "sites": single corners
// (externals or unreduced loop corners) and fully reduced lines. Derived by
// substituting corner values into sum_nu sum_{i<j} (-1)^{i+j+1} x_i ^ x_j:
//   line self        : +1/2 alpha ^ beta
//   a before b       : -alpha_a ^ alpha_b
//   a inside b       : +alpha_a ^ beta_b
//   a crosses b left : -1/2 (alpha_a+beta_a) ^ alpha_b
//                      +1/2 (alpha_a-beta_a) ^ beta_b
// with single corners behaving as alpha = eta*x and no self/beta part.
struct Site {
    int lo, hi;     // corner positions (lo == hi for single corners)
    Combo alpha, beta;
    bool line;
};

std::vector<PhaseTerm> reduce_sites(const std::vector<Site>& sites) {
    std::vector<PhaseTerm> out;
    for (const auto& s : sites)
        if (s.line) emit(out, s.alpha, s.beta, 1);
    for (size_t x = 0; x < sites.size(); ++x)
        for (size_t y = 0; y < sites.size(); ++y) {
            const Site& a = sites[x];
            const Site& b = sites[y];
            if (a.lo >= b.lo) continue;  // canonical order: a starts first
            if (a.hi < b.lo) {           // a entirely before b
                emit(out, a.alpha, b.alpha, -2);
            } else if (a.hi > b.hi) {    // b inside a
                emit(out, b.alpha, a.beta, 2);
            } else {                     // a crosses b from the left
                emit(out, combo_add(a.alpha, a.beta, 1), b.alpha, -1);
                emit(out, combo_add(a.alpha, a.beta, -1), b.beta, 1);
            }
        }
    return out;
}

Site line_site(const OrientedGraph& og, int e) {
    auto [i, j] = og.pos[e];
    return {i, j, alpha_of(og, e), beta_of(og, e), true};
}

Site corner_site(int position, Var v) {
    long long eta = OrientedGraph::position_sign(position);
    return {position, position, {{v, eta}}, {}, false};
}

std::vector<PhaseTerm> merge_terms(const std::vector<PhaseTerm>& in) {
    std::map<std::pair<Var, Var>, long long> acc;
    for (const auto& t : in) {
        Var x = t.a, y = t.b;
        long long h = t.half;
        if (y < x) {
            std::swap(x, y);
            h = -h;
        }
        acc[{x, y}] += h;
    }
    std::vector<PhaseTerm> out;
    for (auto& [key, h] : acc)
        if (h != 0 && !(key.first == key.second)) out.push_back({key.first, key.second, h});
    return out;
}

}  // namespace

RosetteFactor tree_reduce(const OrientedGraph& og) {
    RosetteFactor rf;
    const auto& g = og.graph;
    std::vector<Site> sites;
    for (int p = 1; p <= g.dart_count(); ++p) {
        int d = og.order[p - 1];
        int e = g.dart_edge(d);
        if (e < 0 || is_loop(og, e)) sites.push_back(corner_site(p, {VarKind::Corner, p}));
    }
    for (int e : og.tree) sites.push_back(line_site(og, e));

    for (const auto& s : sites)
        if (!s.line)
            rf.delta_arg.push_back({{VarKind::Corner, s.lo}, OrientedGraph::position_sign(s.lo)});
    for (int e : og.tree) rf.delta_arg.push_back({{VarKind::U, e}, 1});

    rf.phase = merge_terms(reduce_sites(sites));
    return rf;
}

RosetteFactor rosette(const OrientedGraph& og, bool keep_deltas_as_oscillations) {
    RosetteFactor rf;
    const auto& g = og.graph;
    // root delta argument
    for (int k = 0; k < g.n_externals(); ++k)
        rf.delta_arg.push_back({{VarKind::External, k}, eta_ext(og, k)});
    for (int e = 0; e < g.n_edges(); ++e) {
        if (alternating(og, e))
            rf.delta_arg.push_back({{VarKind::U, e}, 1});
        else if (in_class(og, e, LineClass::LoopPlus))
            rf.delta_arg.push_back({{VarKind::W, e}, 1});
        else
            rf.delta_arg.push_back({{VarKind::W, e}, -1});
    }
    std::vector<Site> sites;
    for (int k = 0; k < g.n_externals(); ++k)
        sites.push_back(corner_site(og.ext_position[k], {VarKind::External, k}));
    for (int e = 0; e < g.n_edges(); ++e) sites.push_back(line_site(og, e));
    rf.phase = merge_terms(reduce_sites(sites));

    if (keep_deltas_as_oscillations) {
        // emit every branch delta as a momentum dot-coupling p_l . (arg)
        auto brs = branches(og);
        for (const auto& b : brs) {
            Var p{VarKind::P, b.tree_edge};
            for (int e : b.interior_edges) {
                if (alternating(og, e))
                    rf.dots.push_back({p, {VarKind::U, e}, 2});
                else if (in_class(og, e, LineClass::LoopPlus))
                    rf.dots.push_back({p, {VarKind::W, e}, 2});
                else
                    rf.dots.push_back({p, {VarKind::W, e}, -2});
            }
            // the tree line's own short/long pair enters via its inside corner
            // x_{e_l} = (eta u + v)/2
            rf.dots.push_back({p, {VarKind::U, b.tree_edge}, 1});
            long long etaEl = 0;
            for (auto [pos, eta] : b.boundary)
                if (pos == b.distinguished_position) etaEl = eta;
            rf.dots.push_back({p, {VarKind::V, b.tree_edge}, etaEl});
            for (auto [pos, eta] : b.boundary) {
                if (pos == b.distinguished_position) continue;
                int d = og.order[pos - 1];
                int e = g.dart_edge(d);
                if (e < 0) {
                    // true external corner: find its index
                    for (int k = 0; k < g.n_externals(); ++k)
                        if (og.ext_position[k] == pos)
                            rf.dots.push_back({p, {VarKind::External, k}, 2 * eta});
                } else {
                    // crossing loop corner = (w +- u)/2
                    auto [pi, pj] = og.pos[e];
                    bool first = (pos == pi);
                    long long usign;
                    if (in_class(og, e, LineClass::Loop0))
                        usign = (OrientedGraph::position_sign(pos) == 1) ? 1 : -1;
                    else if (in_class(og, e, LineClass::LoopPlus))
                        usign = first ? 1 : -1;
                    else
                        usign = first ? -1 : 1;
                    rf.dots.push_back({p, {VarKind::W, e}, eta});
                    rf.dots.push_back({p, {VarKind::U, e}, eta * usign});
                }
            }
        }
    }
    return rf;
}

std::vector<std::vector<long long>> phase_block(const RosetteFactor& rf, VarKind row,
                                                VarKind col, int rows, int cols) {
    std::vector<std::vector<long long>> m(rows, std::vector<long long>(cols, 0));
    for (const auto& t : rf.phase) {
        if (t.a.kind == row && t.b.kind == col) {
            m[t.a.id][t.b.id] += t.half;
            if (row == col) m[t.b.id][t.a.id] -= t.half;
        } else if (t.a.kind == col && t.b.kind == row && row != col) {
            m[t.b.id][t.a.id] -= t.half;
        }
    }
    return m;
}

std::vector<std::vector<long long>> intersection_matrix(const OrientedGraph& og,
                                                        const RosetteFactor& rf) {
    // rows/cols = loop lines in edge order
    std::vector<int> loops;
    for (int e = 0; e < og.graph.n_edges(); ++e)
        if (is_loop(og, e)) loops.push_back(e);
    std::map<int, int> idx;
    for (size_t i = 0; i < loops.size(); ++i) idx[loops[i]] = static_cast<int>(i);
    std::vector<std::vector<long long>> m(loops.size(),
                                          std::vector<long long>(loops.size(), 0));
    for (const auto& t : rf.phase)
        if (t.a.kind == VarKind::W && t.b.kind == VarKind::W) {
            int i = idx.at(t.a.id), j = idx.at(t.b.id);
            m[i][j] += t.half;
            m[j][i] -= t.half;
        }
    return m;
}

int intersection_rank(const OrientedGraph& og, const RosetteFactor& rf) {
    return integer_matrix_rank(intersection_matrix(og, rf));
}

namespace {

// Corner coordinates of a line endpoint from its short/long variables.
Vec2 corner_value(const OrientedGraph& og, int e, bool first_end, const OracleSample& s) {
    auto [pi, pj] = og.pos[e];
    LineClass c = og.line_class[e];
    const Vec2& u = s.u[e];
    Vec2 lng = (c == LineClass::Tree) ? s.v[e] : s.w[e];
    int pos = first_end ? pi : pj;
    double usign = 0;
    switch (c) {
        case LineClass::Tree:
        case LineClass::Loop0:
            usign = (OrientedGraph::position_sign(pos) == 1) ? 1.0 : -1.0;
            break;
        case LineClass::LoopPlus:
            usign = first_end ? 1.0 : -1.0;
            break;
        case LineClass::LoopMinus:
            usign = first_end ? -1.0 : 1.0;
            break;
    }
    return (lng + u * usign) * 0.5;
}

}  // namespace

OracleSample make_sample(const OrientedGraph& og, std::mt19937_64& rng) {
    const auto& g = og.graph;
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto rnd = [&]() { return Vec2{{dist(rng), dist(rng)}}; };

    OracleSample s;
    s.x.assign(g.n_externals(), Vec2{});
    s.u.assign(g.n_edges(), Vec2{});
    s.v.assign(g.n_edges(), Vec2{});
    s.w.assign(g.n_edges(), Vec2{});
    for (int e = 0; e < g.n_edges(); ++e) {
        s.u[e] = rnd();
        if (is_loop(og, e)) s.w[e] = rnd();
    }
    int root_ext = -1;
    for (int k = 0; k < g.n_externals(); ++k) {
        if (og.ext_position[k] == 1) {
            root_ext = k;
            continue;
        }
        s.x[k] = rnd();
    }
    if (root_ext < 0) fail("make_sample: root corner is not an external leg");

    // Solve tree long variables from the branch deltas: v_l depends only on
    // u, w and external corners.
    auto brs = branches(og);
    for (const auto& b : brs) {
        int l = b.tree_edge;
        int etaEl = 0;
        for (auto [pos, eta] : b.boundary)
            if (pos == b.distinguished_position) etaEl = eta;
        Vec2 acc{};  // sum over interior lines and boundary-minus-e_l
        for (int e : b.interior_edges) {
            if (alternating(og, e))
                acc = acc + s.u[e];
            else if (in_class(og, e, LineClass::LoopPlus))
                acc = acc + s.w[e];
            else
                acc = acc - s.w[e];
        }
        for (auto [pos, eta] : b.boundary) {
            if (pos == b.distinguished_position) continue;
            int d = og.order[pos - 1];
            int e = g.dart_edge(d);
            Vec2 val;
            if (e < 0) {
                int k = -1;
                for (int q = 0; q < g.n_externals(); ++q)
                    if (og.ext_position[q] == pos) k = q;
                if (k == root_ext)
                    fail("make_sample: root corner inside a branch");
                val = s.x[k];
            } else {
                auto [pi, pj] = og.pos[e];
                val = corner_value(og, e, pos == pi, s);
            }
            acc = acc + val * static_cast<double>(eta);
        }
        s.v[l] = (s.u[l] + acc * 2.0) * static_cast<double>(-etaEl);
    }

    // Solve the root external from the global delta.
    Vec2 rest{};
    for (int k = 0; k < g.n_externals(); ++k) {
        if (k == root_ext) continue;
        rest = rest + s.x[k] * static_cast<double>(eta_ext(og, k));
    }
    for (int e = 0; e < g.n_edges(); ++e) {
        if (alternating(og, e))
            rest = rest + s.u[e];
        else if (in_class(og, e, LineClass::LoopPlus))
            rest = rest + s.w[e];
        else if (in_class(og, e, LineClass::LoopMinus))
            rest = rest - s.w[e];
    }
    s.x[root_ext] = rest * static_cast<double>(-eta_ext(og, root_ext));
    return s;
}

double phase_oracle(const OrientedGraph& og, const OracleSample& s, double theta) {
    const auto& g = og.graph;
    // all corner positions
    std::vector<Vec2> corner(g.dart_count());
    for (int k = 0; k < g.n_externals(); ++k) corner[g.dart_id(g.externals()[k])] = s.x[k];
    for (int e = 0; e < g.n_edges(); ++e) {
        auto [pi, pj] = og.pos[e];
        corner[og.order[pi - 1]] = corner_value(og, e, true, s);
        corner[og.order[pj - 1]] = corner_value(og, e, false, s);
    }
    double wedge_scale = 2.0 / theta;
    double total = 0;
    for (int vtx = 0; vtx < g.n_vertices(); ++vtx) {
        int val = g.valence(vtx);
        // local order: intrinsic ccw slots starting at a + corner
        int start = -1;
        for (int slot = 0; slot < val; ++slot)
            if (og.corner_sign[g.dart_id({vtx, slot})] == 1) {
                start = slot;
                break;
            }
        if (start < 0) fail("phase_oracle: vertex without a + corner");
        std::vector<Vec2> xs(val);
        for (int i = 0; i < val; ++i) xs[i] = corner[g.dart_id({vtx, (start + i) % val})];
        // vertex delta check
        Vec2 d{};
        for (int i = 0; i < val; ++i) d = d + xs[i] * ((i % 2 == 0) ? 1.0 : -1.0);
        if (d.norm() > 1e-12 * (1.0 + xs[0].norm()))
            fail("phase_oracle: sample violates a vertex delta");
        for (int i = 0; i < val; ++i)
            for (int j = i + 1; j < val; ++j) {
                double sign = ((i + j + 1) % 2 == 0) ? 1.0 : -1.0;
                total += sign * wedge_scale * xs[i].cross(xs[j]);
            }
    }
    return total;
}

double eval_phase(const OrientedGraph& og, const std::vector<PhaseTerm>& phase,
                  const OracleSample& s, double theta) {
    const auto& g = og.graph;
    auto value = [&](const Var& v) -> Vec2 {
        switch (v.kind) {
            case VarKind::External: return s.x[v.id];
            case VarKind::U: return s.u[v.id];
            case VarKind::V: return s.v[v.id];
            case VarKind::W: return s.w[v.id];
            case VarKind::Corner: {
                int d = og.order[v.id - 1];
                int e = g.dart_edge(d);
                if (e < 0) {
                    for (int k = 0; k < g.n_externals(); ++k)
                        if (og.ext_position[k] == v.id) return s.x[k];
                    fail("eval_phase: corner not found");
                }
                auto [pi, pj] = og.pos[e];
                return corner_value(og, e, v.id == pi, s);
            }
            default: fail("eval_phase: momentum variables have no sample value");
        }
    };
    double wedge_scale = 2.0 / theta;
    double total = 0;
    for (const auto& t : phase)
        total += 0.5 * static_cast<double>(t.half) * wedge_scale * value(t.a).cross(value(t.b));
    return total;
}

OracleReport oracle_report(const OrientedGraph& og, const RosetteFactor& rf, int n_samples,
                           uint64_t seed, double theta) {
    std::mt19937_64 rng(seed);
    OracleReport rep;
    rep.samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        OracleSample s = make_sample(og, rng);
        double ref = phase_oracle(og, s, theta);
        double got = eval_phase(og, rf.phase, s, theta);
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(ref - got));
    }
    return rep;
}

RosetteFactor resolve_tree_longs(const OrientedGraph& og, const RosetteFactor& rf) {
    const auto& g = og.graph;
    // v_l = -eta(e_l) u_l - 2 eta(e_l) ( interior u/w sums + boundary corners )
    std::vector<std::vector<ComboTerm>> subst(g.n_edges());
    auto brs = branches(og);
    for (const auto& b : brs) {
        int l = b.tree_edge;
        long long etaEl = 0;
        for (auto [pos, eta] : b.boundary)
            if (pos == b.distinguished_position) etaEl = eta;
        std::vector<ComboTerm> f;
        f.push_back({{VarKind::U, l}, -2 * etaEl});  // half-units: coeff*2
        for (int e : b.interior_edges) {
            if (alternating(og, e))
                f.push_back({{VarKind::U, e}, -4 * etaEl});
            else if (in_class(og, e, LineClass::LoopPlus))
                f.push_back({{VarKind::W, e}, -4 * etaEl});
            else
                f.push_back({{VarKind::W, e}, 4 * etaEl});
        }
        for (auto [pos, eta] : b.boundary) {
            if (pos == b.distinguished_position) continue;
            int d = og.order[pos - 1];
            int e = g.dart_edge(d);
            if (e < 0) {
                for (int k = 0; k < g.n_externals(); ++k)
                    if (og.ext_position[k] == pos)
                        f.push_back({{VarKind::External, k}, -4 * etaEl * eta});
            } else {
                auto [pi, pj] = og.pos[e];
                bool first = (pos == pi);
                long long usign;
                if (in_class(og, e, LineClass::Loop0))
                    usign = (OrientedGraph::position_sign(pos) == 1) ? 1 : -1;
                else if (in_class(og, e, LineClass::LoopPlus))
                    usign = first ? 1 : -1;
                else
                    usign = first ? -1 : 1;
                // corner = (w + usign*u)/2
                f.push_back({{VarKind::W, e}, -2 * etaEl * eta});
                f.push_back({{VarKind::U, e}, -2 * etaEl * eta * usign});
            }
        }
        subst[l] = std::move(f);
    }
    RosetteFactor out;
    out.delta_arg = rf.delta_arg;
    out.dots = rf.dots;
    std::vector<PhaseTerm> terms;
    for (const auto& t : rf.phase) {
        bool av = t.a.kind == VarKind::V, bv = t.b.kind == VarKind::V;
        if (!av && !bv) {
            terms.push_back(t);
            continue;
        }
        if (av && bv) {
            for (const auto& ta : subst[t.a.id])
                for (const auto& tb : subst[t.b.id])
                    terms.push_back({ta.v, tb.v, t.half * ta.c * tb.c / 4});
        } else if (av) {
            for (const auto& ta : subst[t.a.id]) terms.push_back({ta.v, t.b, t.half * ta.c / 2});
        } else {
            for (const auto& tb : subst[t.b.id]) terms.push_back({t.a, tb.v, t.half * tb.c / 2});
        }
    }
    out.phase = merge_terms(terms);
    return out;
}

RosetteFactor symmetrized_rosette(const RibbonGraph& g, const std::vector<int>& tree,
                                  SlotRef root) {
    OrientedGraph ccw = orient(g, tree, root, WalkDirection::CounterClockwise);
    OrientedGraph cw = orient(g, tree, root, WalkDirection::Clockwise);
    if (!ccw.orientable() || !cw.orientable())
        fail("symmetrized_rosette: orientable graphs only");
    RosetteFactor a = rosette(ccw);
    RosetteFactor b = rosette(cw);
    // The two contour writings present conjugate phases of the same real
    // amplitude; their sum is the convention-free representative. The root
    // leg is then eliminated with the global delta, after which no
    // external-u coupling survives.
    int root_ext = -1;
    for (int k = 0; k < g.n_externals(); ++k)
        if (ccw.ext_position[k] == 1) root_ext = k;
    if (root_ext < 0) fail("symmetrized_rosette: root corner must be an external leg");
    // x_root = -eta_root * (sum_{k != root} eta_k x_k + sum u)
    std::vector<ComboTerm> root_sub;
    long long eta_root = eta_ext(ccw, root_ext);
    for (int k = 0; k < g.n_externals(); ++k) {
        if (k == root_ext) continue;
        root_sub.push_back({{VarKind::External, k}, -2 * eta_root * eta_ext(ccw, k)});
    }
    for (int e = 0; e < g.n_edges(); ++e) root_sub.push_back({{VarKind::U, e}, -2 * eta_root});

    std::vector<PhaseTerm> terms;
    auto push = [&](const PhaseTerm& t) {
        bool ar = t.a.kind == VarKind::External && t.a.id == root_ext;
        bool br = t.b.kind == VarKind::External && t.b.id == root_ext;
        if (!ar && !br) {
            terms.push_back(t);
        } else if (ar && !br) {
            for (const auto& c : root_sub) terms.push_back({c.v, t.b, t.half * c.c / 2});
        } else if (br && !ar) {
            for (const auto& c : root_sub) terms.push_back({t.a, c.v, t.half * c.c / 2});
        }
    };
    for (const auto& t : a.phase) push(t);
    for (const auto& t : b.phase) push(t);
    RosetteFactor out;
    out.delta_arg = a.delta_arg;
    out.phase = merge_terms(terms);
    return out;
}

MasselotteChange masselotte_jacobian(const OrientedGraph& og, double omega) {
    if (!og.orientable())
        fail("masselotte_jacobian: construction established for orientable graphs only");
    const auto& g = og.graph;
    int ne = g.n_edges();
    MasselotteChange mc;
    mc.line_order.resize(ne);
    std::vector<int> ids(ne);
    for (int e = 0; e < ne; ++e) ids[e] = e;
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return og.pos[a].first < og.pos[b].first; });
    mc.line_order = ids;
    std::vector<int> col(ne);
    for (int i = 0; i < ne; ++i) col[ids[i]] = i;

    mc.matrix.assign(ne, std::vector<double>(ne, 0.0));
    for (int i = 0; i < ne; ++i) {
        int e = ids[i];
        mc.matrix[i][i] = 0.5 * (1.0 + og.eps_field[e] * omega);
        for (int e2 = 0; e2 < ne; ++e2) {
            if (!is_loop(og, e2)) continue;
            Relation r = line_relation(og, e2, e);  // e2 relative to e
            bool couples = (r == Relation::Contains) ||
                           (is_loop(og, e) && r == Relation::CrossLeft);
            if (couples) mc.matrix[i][col[e2]] += 1.0;
        }
    }
    mc.triangular = true;
    for (int i = 0; i < ne; ++i)
        for (int j = i + 1; j < ne; ++j)
            if (mc.matrix[i][j] != 0.0) mc.triangular = false;
    mc.det_numeric = lu_determinant(mc.matrix);
    mc.det_closed = 1.0;
    for (int e = 0; e < ne; ++e) mc.det_closed *= 0.5 * (1.0 + og.eps_field[e] * omega);
    return mc;
}

}  // namespace ncrg
