#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "ncrg/forests.hpp"
#include "test_support.hpp"

using namespace ncrg;
using namespace ncrg::testing;

namespace {

bool contains_edge_set(const std::vector<Subgraph>& subs, const std::vector<int>& edges) {
    return std::any_of(subs.begin(), subs.end(),
                       [&](const Subgraph& s) { return s.edges == edges; });
}

int find_subgraph(const std::vector<Subgraph>& subs, const std::vector<int>& edges) {
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i].edges == edges) return static_cast<int>(i);
    return -1;
}

}  // namespace

TEST_CASE("divergent subgraphs of the eye graph") {
    auto g = eye_graph();
    auto subs = divergent_subgraphs(g);
    CHECK(subs.size() == 4);
    CHECK(contains_edge_set(subs, {0, 1}));
    CHECK(contains_edge_set(subs, {0, 1, 2, 3}));
    CHECK(contains_edge_set(subs, {0, 1, 4, 5}));
    CHECK(contains_edge_set(subs, {0, 1, 2, 3, 4, 5}));

    // single vertex with 4 externals: only G itself
    auto v1 = RibbonGraph::quartic(1, {{{0, 0}, {0, 2}, {}}}, {{0, 1}, {0, 3}});
    CHECK(divergent_subgraphs(v1).size() == 1);

    // brute-force check on the double bubble: both bubbles, both
    // bubble+insertion chains and the whole graph
    auto db = double_bubble();
    auto sd = divergent_subgraphs(db);
    CHECK(sd.size() == 3);
    CHECK(contains_edge_set(sd, {0, 1}));
    CHECK(contains_edge_set(sd, {2, 3}));
    CHECK(contains_edge_set(sd, {0, 1, 2, 3}));  // the whole graph

    // budget guard
    std::mt19937_64 rng(3);
    auto big = random_graph(rng, 9, 4, false);
    CHECK_THROWS_AS(divergent_subgraphs(big), std::runtime_error);
}

TEST_CASE("forest enumeration") {
    auto g = eye_graph();
    auto subs = divergent_subgraphs(g);
    auto forests = all_forests(subs);
    CHECK(forests.size() == 12);

    // the two overlapping four-point subgraphs never co-occur
    int g2 = find_subgraph(subs, {0, 1, 2, 3});
    int g3 = find_subgraph(subs, {0, 1, 4, 5});
    REQUIRE(g2 >= 0);
    REQUIRE(g3 >= 0);
    for (const auto& f : forests) {
        bool has2 = std::find(f.begin(), f.end(), g2) != f.end();
        bool has3 = std::find(f.begin(), f.end(), g3) != f.end();
        bool both = has2 && has3;
        CHECK_FALSE(both);
    }

    // a single divergent subgraph yields two forests (empty and itself)
    auto v1 = RibbonGraph::quartic(1, {{{0, 0}, {0, 2}, {}}}, {{0, 1}, {0, 3}});
    CHECK(all_forests(divergent_subgraphs(v1)).size() == 2);
}

TEST_CASE("classification basics") {
    auto g = eye_graph();
    auto subs = divergent_subgraphs(g);

    // quasi-local attribution: H(empty) is the dangerous set
    ScaleAttribution mu;
    mu.scale = {5, 5, 3, 3, 1, 1};
    Forest empty;
    Forest h = completion(g, mu, subs, empty);
    // dangerous subgraphs under this attribution: the bubble, {0,1,2,3}, G
    Forest expected;
    for (size_t i = 0; i < subs.size(); ++i) {
        RelativeIndices r = relative_indices(g, mu, subs, {static_cast<int>(i)},
                                             static_cast<int>(i));
        if (r.i_g > r.e_g) expected.push_back(static_cast<int>(i));
    }
    CHECK(h == expected);
    CHECK(h.size() == 3);

    // all internal scales below external ones: nothing dangerous
    auto b = bubble(0, 0);
    auto sb = divergent_subgraphs(b, DivergenceScope::FourPointOnly);
    ScaleAttribution mb;
    mb.scale = {0, 0};
    for (size_t i = 0; i < sb.size(); ++i) {
        // the whole graph has external scale -1, so it is always dangerous;
        // check only proper subgraphs
        if (sb[i].edges.size() == b.edges().size()) continue;
        RelativeIndices r =
            relative_indices(b, mb, sb, {static_cast<int>(i)}, static_cast<int>(i));
        CHECK_FALSE(r.i_g > r.e_g);
    }
}

TEST_CASE("classification lemma on random attributions") {
    std::mt19937_64 rng(31);
    std::vector<RibbonGraph> graphs = {eye_graph(), double_bubble(), triple_bubble()};
    for (auto& g : graphs) {
        auto subs = divergent_subgraphs(g, DivergenceScope::FourPointOnly);
        auto forests = all_forests(subs);
        for (int rep = 0; rep < 20; ++rep) {
            ScaleAttribution mu;
            mu.scale = random_scales(rng, g.n_edges(), 8);

            // idempotence
            for (const auto& f : forests) {
                Forest t = t_mu(g, mu, subs, f);
                CHECK(t_mu(g, mu, subs, t) == t);
            }
            // partition property: the classes {F' : T(F') = F} are exactly
            // the intervals [F, F + H(F)]
            size_t covered = 0;
            for (const auto& f : forests) {
                if (t_mu(g, mu, subs, f) != f) continue;
                Forest h = completion(g, mu, subs, f);
                for (const auto& fp : forests) {
                    // F subset fp subset F u H?
                    bool lower = std::includes(fp.begin(), fp.end(), f.begin(), f.end());
                    Forest fu = f;
                    fu.insert(fu.end(), h.begin(), h.end());
                    std::sort(fu.begin(), fu.end());
                    bool upper = std::includes(fu.begin(), fu.end(), fp.begin(), fp.end());
                    bool in_interval = lower && upper;
                    bool t_match = t_mu(g, mu, subs, fp) == f;
                    CHECK(in_interval == t_match);
                    if (in_interval) ++covered;
                }
            }
            CHECK(covered == forests.size());

            // monotonicity of relative indices under forest growth
            const Forest& big = forests.back();
            for (const auto& f : forests) {
                if (!std::includes(big.begin(), big.end(), f.begin(), f.end())) continue;
                for (int m : f) {
                    RelativeIndices r1 = relative_indices(g, mu, subs, f, m);
                    RelativeIndices r2 = relative_indices(g, mu, subs, big, m);
                    CHECK(r1.i_g <= r2.i_g);
                    CHECK(r1.e_g >= r2.e_g);
                }
            }
        }
    }
}

TEST_CASE("completion rejects non-closed input") {
    auto g = eye_graph();
    auto subs = divergent_subgraphs(g, DivergenceScope::FourPointOnly);
    ScaleAttribution mu;
    mu.scale = {5, 5, 3, 3, 1, 1};
    // find a forest that is not inoffensive-closed
    auto forests = all_forests(subs);
    for (const auto& f : forests) {
        if (f.empty()) continue;
        if (t_mu(g, mu, subs, f) != f) {
            CHECK_THROWS_AS(completion(g, mu, subs, f), std::invalid_argument);
            return;
        }
    }
    FAIL("expected at least one non-closed forest under this attribution");
}
