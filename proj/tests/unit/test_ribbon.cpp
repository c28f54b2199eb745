#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ncrg/ribbon.hpp"
#include "test_support.hpp"

using namespace ncrg;
using namespace ncrg::testing;

TEST_CASE("graph validation") {
    // 2 vertices, 3 internal edges, 2 externals
    auto g = RibbonGraph::quartic(
        2, {{{0, 0}, {1, 0}, {}}, {{0, 1}, {1, 1}, {}}, {{0, 2}, {1, 2}, {}}},
        {{0, 3}, {1, 3}});
    CHECK(g.n_edges() == 3);
    CHECK(g.n_externals() == 2);

    CHECK_THROWS_WITH_AS(
        RibbonGraph::quartic(1, {{{0, 1}, {0, 1}, {}}}, {{0, 0}, {0, 2}, {0, 3}}),
        doctest::Contains("slot occupied"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(RibbonGraph::quartic(1, {}, {{0, 0}, {0, 1}, {0, 2}}),
                         doctest::Contains("dangling slot"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(RibbonGraph::quartic(1, {{{0, 0}, {0, 4}, {}}}, {{0, 1}, {0, 2}, {0, 3}}),
                         doctest::Contains("slot index"), std::invalid_argument);

    // eye graph: I=6, N=4
    auto eye = eye_graph();
    CHECK(eye.n_edges() == 6);
    CHECK(eye.n_externals() == 4);
    CHECK(4 * eye.n_vertices() == 2 * eye.n_edges() + eye.n_externals());
}

TEST_CASE("topology fixtures") {
    Topology t = topology(planar_topo_fixture());
    CHECK(t.V == 3);
    CHECK(t.I == 3);
    CHECK(t.F == 2);
    CHECK(t.B == 2);
    CHECK(t.genus == 0);

    t = topology(nonplanar_sunset());
    CHECK(t.V == 2);
    CHECK(t.I == 3);
    CHECK(t.F == 1);
    CHECK(t.B == 1);
    CHECK(t.genus == 1);

    t = topology(crossing_tadpole());
    CHECK(t.genus == 1);
    CHECK(t.F == 1);

    // disconnected input is rejected
    auto disc = RibbonGraph::quartic(
        2, {{{0, 0}, {0, 1}, {}}, {{1, 0}, {1, 1}, {}}},
        {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    CHECK_THROWS_AS(topology(disc), std::invalid_argument);
}

TEST_CASE("euler relation on random graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = random_graph(rng, 1 + int(rng() % 6), 2 + 2 * int(rng() % 2), trial % 2 == 0);
        Topology t = topology(g);
        CHECK(t.V - t.I + t.F == 2 - 2 * t.genus);
        CHECK(t.B <= t.F);
        CHECK(t.genus >= 0);
    }
}

TEST_CASE("dual exchanges faces and vertices") {
    auto g = planar_topo_fixture();
    Topology t = topology(g);
    auto d = dual(g);
    Topology td = topology(d);
    CHECK(td.V == t.F);
    CHECK(td.F == t.V);
    CHECK(td.I == t.I);
    CHECK(td.genus == t.genus);

    // one-face ribbon graph has a one-vertex dual
    auto sun = nonplanar_sunset();
    CHECK(topology(dual(sun)).V == 1);

    // planar one-vertex double tadpole: dual has 3 vertices, genus 0
    auto dt = RibbonGraph::quartic(1, {{{0, 0}, {0, 1}, {}}, {{0, 2}, {0, 3}, {}}}, {});
    auto ddt = dual(dt);
    CHECK(topology(ddt).V == 3);
    CHECK(topology(ddt).genus == 0);

    // dual of dual restores (V, I, F, g)
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto rg = random_graph(rng, 1 + int(rng() % 5), 2, false);
        Topology t0 = topology(rg);
        Topology t1 = topology(dual(rg));
        Topology t2 = topology(dual(dual(rg)));
        CHECK(t1.genus == t0.genus);
        CHECK(t1.I == t0.I);
        CHECK(t2.V == t0.V);
        CHECK(t2.F == t0.F);
        CHECK(t2.genus == t0.genus);
    }
}

TEST_CASE("orientation invariants") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_graph(rng, 2 + int(rng() % 4), 2 + 2 * int(rng() % 2), trial % 2 == 0);
        auto og = orient(g, any_spanning_tree(g), default_root(g));
        for (int e = 0; e < g.n_edges(); ++e) {
            int da = g.dart_id(g.edges()[e].a), db = g.dart_id(g.edges()[e].b);
            int prod = og.corner_sign[da] * og.corner_sign[db];
            switch (og.line_class[e]) {
                case LineClass::Tree:
                case LineClass::Loop0: CHECK(prod == -1); break;
                case LineClass::LoopPlus:
                    CHECK(og.corner_sign[da] == 1);
                    CHECK(og.corner_sign[db] == 1);
                    break;
                case LineClass::LoopMinus:
                    CHECK(og.corner_sign[da] == -1);
                    CHECK(og.corner_sign[db] == -1);
                    break;
            }
        }
        // position parity equals the corner sign
        for (int d = 0; d < g.dart_count(); ++d)
            CHECK(og.corner_sign[d] == OrientedGraph::position_sign(og.position[d]));
        // alternating-field graphs are orientable
        if (trial % 2 == 0) CHECK(og.orientable());
    }

    // a real-field crossing tadpole has a same-sign loop line
    auto tad = RibbonGraph::quartic(1, {{{0, 0}, {0, 2}, {}}}, {{0, 1}, {0, 3}});
    auto ogt = orient(tad, {}, default_root(tad));
    bool same_sign = ogt.line_class[0] == LineClass::LoopPlus ||
                     ogt.line_class[0] == LineClass::LoopMinus;
    CHECK(same_sign);
    CHECK_FALSE(ogt.orientable());

    // non-spanning tree is rejected
    auto g = nonplanar_sunset();
    CHECK_THROWS_AS(orient(g, {0, 1}, default_root(g)), std::invalid_argument);
}

TEST_CASE("total order and branches") {
    // two-vertex tree: walk order and adjacency of the tree corner pair
    auto g = RibbonGraph::quartic(2, {{{0, 2}, {1, 0}, {}}},
                                  {{0, 0}, {0, 1}, {0, 3}, {1, 1}, {1, 2}, {1, 3}});
    auto og = orient(g, {0}, {0, 0});
    CHECK(og.pos[0] == std::pair<int, int>{3, 4});
    auto brs = branches(og);
    REQUIRE(brs.size() == 1);
    CHECK(brs[0].vertices == std::vector<int>{1});
    CHECK(brs[0].distinguished_position == 4);

    // branch of the middle tree line in a three-vertex chain contains the
    // two upper vertices
    auto chain = RibbonGraph::quartic(
        3, {{{0, 2}, {1, 0}, {}}, {{1, 2}, {2, 0}, {}}},
        {{0, 0}, {0, 1}, {0, 3}, {1, 1}, {1, 3}, {2, 1}, {2, 2}, {2, 3}});
    auto ogc = orient(chain, {0, 1}, {0, 0});
    auto brc = branches(ogc);
    REQUIRE(brc.size() == 2);
    for (const auto& b : brc) {
        if (b.tree_edge == 0) CHECK(b.vertices == std::vector<int>{1, 2});
        if (b.tree_edge == 1) CHECK(b.vertices == std::vector<int>{2});
    }
}

TEST_CASE("line relations") {
    // nested and crossing loops on one vertex plus an external reference
    auto g = RibbonGraph::quartic(
        2, {{{0, 2}, {1, 0}, {}}, {{0, 1}, {0, 3}, {}}, {{1, 1}, {1, 3}, {}}},
        {{0, 0}, {1, 2}});
    auto og = orient(g, {0}, {0, 0});
    auto rel = line_relations(og);
    CHECK(rel.line_line[0][0] == Relation::None);  // irreflexive
    // tree corners are adjacent: the tree line never contains another line
    for (int e = 1; e < 3; ++e) CHECK(rel.line_line[0][e] != Relation::Contains);

    // order examples on the sunset: first loop before nothing, crossings
    auto sun = nonplanar_sunset();
    auto ogs = orient(sun, {0}, default_root(sun));
    auto r01 = line_relation(ogs, 1, 2);
    CHECK((r01 == Relation::CrossLeft || r01 == Relation::CrossRight ||
           r01 == Relation::Inside || r01 == Relation::Contains ||
           r01 == Relation::Before || r01 == Relation::After));
    // relation table is consistent with its transpose
    auto rels = line_relations(ogs);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a == b) continue;
            Relation r = rels.line_line[a][b], s = rels.line_line[b][a];
            if (r == Relation::Before) CHECK(s == Relation::After);
            if (r == Relation::Inside) CHECK(s == Relation::Contains);
            if (r == Relation::CrossLeft) CHECK(s == Relation::CrossRight);
        }
}

TEST_CASE("spanning trees") {
    // all scales equal: lexicographically first spanning tree
    auto g = nonplanar_sunset({1, 1, 1});
    CHECK(spanning_tree(g, TreeMode::Maximize) == std::vector<int>{0});
    CHECK(spanning_tree(g, TreeMode::Minimize) == std::vector<int>{0});

    // parallel edges at scales {3,1}: maximize picks the scale-3 edge
    auto g2 = RibbonGraph::quartic(2, {{{0, 0}, {1, 0}, 3}, {{0, 1}, {1, 1}, 1}},
                                   {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    CHECK(spanning_tree(g2, TreeMode::Maximize) == std::vector<int>{0});
    CHECK(spanning_tree(g2, TreeMode::Minimize) == std::vector<int>{1});
}
