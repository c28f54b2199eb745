// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ncrg/forests.hpp"
#include "ncrg/kernels.hpp"
#include "ncrg/moyal.hpp"
#include "ncrg/multiscale.hpp"
#include "ncrg/ribbon.hpp"
#include "ncrg/rosette.hpp"
#include "test_support.hpp"

using namespace ncrg;
using namespace ncrg::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %-38s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", id,
                name.c_str(), dt, out.detail.empty() ? "" : " -- ", out.detail.c_str());
    if (!out.pass) ++failures;
}

OrientedGraph oriented(const RibbonGraph& g) {
    return orient(g, spanning_tree(g, TreeMode::Maximize), default_root(g));
}

Outcome topology_fixtures() {
    Outcome o;
    Topology t = topology(planar_topo_fixture());
    if (!(t.V == 3 && t.I == 3 && t.F == 2 && t.B == 2 && t.genus == 0)) {
        o.pass = false;
        o.detail = "planar fixture mismatch";
    }
    Topology s = topology(nonplanar_sunset());
    if (!(s.V == 2 && s.I == 3 && s.F == 1 && s.B == 1 && s.genus == 1)) {
        o.pass = false;
        o.detail += " nonplanar fixture mismatch";
    }
    return o;
}

Outcome eye_forests() {
    Outcome o;
    auto g = eye_graph();
    auto subs = divergent_subgraphs(g);
    auto forests = all_forests(subs);
    if (forests.size() != 12) {
        o.pass = false;
        o.detail = "count " + std::to_string(forests.size());
        return o;
    }
    int g2 = -1, g3 = -1;
    for (size_t i = 0; i < subs.size(); ++i) {
        if (subs[i].edges == std::vector<int>{0, 1, 2, 3}) g2 = int(i);
        if (subs[i].edges == std::vector<int>{0, 1, 4, 5}) g3 = int(i);
    }
    for (const auto& f : forests) {
        bool has2 = std::find(f.begin(), f.end(), g2) != f.end();
        bool has3 = std::find(f.begin(), f.end(), g3) != f.end();
        if (has2 && has3) {
            o.pass = false;
            o.detail = "overlapping pair co-occurs";
        }
    }
    return o;
}

Outcome forest_classification() {
    Outcome o;
    std::mt19937_64 rng(424242);
    std::vector<RibbonGraph> graphs = {eye_graph(), double_bubble(), triple_bubble(),
                                       gn_noncritical_fixture(), bubble()};
    for (auto& g : graphs) {
        auto subs = divergent_subgraphs(g, DivergenceScope::FourPointOnly);
        auto forests = all_forests(subs);
        for (int rep = 0; rep < 20; ++rep) {
            ScaleAttribution mu;
            mu.scale = random_scales(rng, g.n_edges(), 8);
            size_t covered = 0;
            for (const auto& f : forests) {
                Forest t = t_mu(g, mu, subs, f);
                if (t_mu(g, mu, subs, t) != t) {
                    o.pass = false;
                    o.detail = "idempotence failed";
                    return o;
                }
                if (t != f) continue;
                Forest h = completion(g, mu, subs, f);
                Forest fu = f;
                fu.insert(fu.end(), h.begin(), h.end());
                std::sort(fu.begin(), fu.end());
                for (const auto& fp : forests) {
                    bool lower = std::includes(fp.begin(), fp.end(), f.begin(), f.end());
                    bool upper = std::includes(fu.begin(), fu.end(), fp.begin(), fp.end());
                    bool interval = lower && upper;
                    if (interval != (t_mu(g, mu, subs, fp) == f)) {
                        o.pass = false;
                        o.detail = "interval mismatch";
                        return o;
                    }
                    if (interval) ++covered;
                }
            }
            if (covered != forests.size()) {
                o.pass = false;
                o.detail = "partition not exhaustive";
                return o;
            }
        }
    }
    return o;
}

Outcome rosette_oracle() {
    Outcome o;
    std::mt19937_64 rng(7);
    double worst = 0;
    int graphs = 0;
    while (graphs < 20) {
        int n = 1 + int(rng() % 5);
        int nx = 2 + 2 * int(rng() % 3);
        if (nx > 4 * n - 2) nx = 2;
        auto g = random_graph(rng, n, nx, true);
        auto og = oriented(g);
        if (!og.orientable()) continue;
        auto rep = oracle_report(og, rosette(og), 100, 1000 + graphs);
        worst = std::max(worst, rep.max_abs_error);
        ++graphs;
    }
    o.pass = worst < 1e-9;
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |dphi| = %.2e", worst);
    o.detail = buf;
    return o;
}

Outcome intersection_rank_criterion() {
    Outcome o;
    std::mt19937_64 rng(99);
    int checked = 0;
    while (checked < 50) {
        int n = 1 + int(rng() % 6);
        int nx = 2 + 2 * int(rng() % 2);
        if (nx > 4 * n - 2) nx = 2;
        auto g = random_graph(rng, n, nx, true);
        auto og = oriented(g);
        int rank = intersection_rank(og, rosette(og));
        if (rank != 2 * topology(g).genus) {
            o.pass = false;
            o.detail = "rank mismatch";
            return o;
        }
        ++checked;
    }
    o.detail = std::to_string(checked) + " graphs";
    return o;
}

Outcome masselotte_criterion() {
    Outcome o;
    std::mt19937_64 rng(55);
    double worst = 0;
    for (int trial = 0; trial < 15; ++trial) {
        auto g = random_graph(rng, 2 + int(rng() % 4), 2 + 2 * int(rng() % 2), true);
        auto og = oriented(g);
        for (double omega : {0.0, 0.3, 0.9}) {
            auto mc = masselotte_jacobian(og, omega);
            if (!mc.triangular) {
                o.pass = false;
                o.detail = "not triangular";
                return o;
            }
            worst = std::max(worst, std::abs(mc.det_numeric - mc.det_closed));
        }
    }
    o.pass = worst < 1e-12;
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |det err| = %.2e", worst);
    o.detail = buf;
    return o;
}

Outcome matrix_inversion() {
    Outcome o;
    KernelParams p;  // theta 1, omega 0.8, mass 1
    p.dimension = 2;
    int h = 0;
    // quadrature values on the inner block
    int inner = 20;
    std::vector<std::vector<double>> Gq(inner, std::vector<double>(inner));
    for (int m = 0; m < inner; ++m)
        for (int l = 0; l < inner; ++l)
            Gq[m][l] = matrix_propagator(MatrixIndex4::d2(m, m + h, l + h, l), p);
    // sup |Delta G - Id| over the inner half block at truncation 40
    double sup40 = 0;
    {
        int T = 40;
        std::vector<std::vector<double>> G(T, std::vector<double>(T));
        for (int m = 0; m < T; ++m)
            for (int l = 0; l < T; ++l)
                G[m][l] = matrix_propagator(MatrixIndex4::d2(m, m + h, l + h, l), p);
        for (int m = 0; m < T / 2; ++m)
            for (int l = 0; l < T / 2; ++l) {
                double acc = 0;
                for (int k = std::max(0, m - 1); k <= std::min(T - 1, m + 1); ++k)
                    acc += matrix_delta(MatrixIndex4::d2(m, m + h, k + h, k), p) * G[k][l];
                sup40 = std::max(sup40, std::abs(acc - (m == l ? 1.0 : 0.0)));
            }
    }
    // truncated band-matrix inverse approaches the quadrature values on the
    // inner block as the truncation grows
    auto tail_gap = [&](int T) {
        std::vector<double> d(T), e(T), f(T);
        for (int i = 0; i < T; ++i) {
            d[i] = matrix_delta(MatrixIndex4::d2(i, i + h, i + h, i), p);
            if (i + 1 < T) {
                e[i] = matrix_delta(MatrixIndex4::d2(i, i + h, i + 1 + h, i + 1), p);
                f[i] = matrix_delta(MatrixIndex4::d2(i + 1, i + 1 + h, i + h, i), p);
            }
        }
        double worst = 0;
        for (int col = 0; col < inner; ++col) {
            std::vector<double> dd = d, rhs(T, 0.0);
            rhs[col] = 1.0;
            for (int i = 1; i < T; ++i) {
                double w = f[i - 1] / dd[i - 1];
                dd[i] -= w * e[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            std::vector<double> x(T);
            x[T - 1] = rhs[T - 1] / dd[T - 1];
            for (int i = T - 2; i >= 0; --i) x[i] = (rhs[i] - e[i] * x[i + 1]) / dd[i];
            for (int m = 0; m < inner; ++m)
                worst = std::max(worst, std::abs(x[m] - Gq[m][col]));
        }
        return worst;
    };
    double g20 = tail_gap(20), g40 = tail_gap(40), g60 = tail_gap(60);
    // the gap decreases until it reaches the quadrature floor
    o.pass = sup40 < 1e-6 && g40 < g20 && g60 <= g40 * 1.5 + 1e-12 && g40 < 1e-6;
    char buf[128];
    std::snprintf(buf, sizeof buf, "sup(40) = %.1e, tail gap 20/40/60 = %.1e/%.1e/%.1e",
                  sup40, g20, g40, g60);
    o.detail = buf;
    return o;
}

Outcome scaling_exponents() {
    Outcome o;
    KernelParams p;
    auto phi4 = slice_bound_report(p, 2, 6, SliceModel::Phi4Matrix);
    auto free0 = slice_bound_report(p, 2, 6, SliceModel::Phi4MatrixOmega0);
    auto gn = slice_bound_report(p, 2, 6, SliceModel::GnMatrix);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "phi4 (%.2f,%.2f) free (%.2f,%.2f) gn (%.2f,%.2f)", phi4.delta0_hat,
                  phi4.delta1_hat, free0.delta0_hat, free0.delta1_hat, gn.delta0_hat,
                  gn.delta1_hat);
    o.detail = buf;
    o.pass = std::abs(phi4.delta0_hat - 2) < 0.2 && std::abs(phi4.delta1_hat - 2) < 0.2 &&
             std::abs(free0.delta0_hat - 1) < 0.2 && std::abs(free0.delta1_hat - 0) < 0.2 &&
             std::abs(gn.delta0_hat - 1) < 0.2 && std::abs(gn.delta1_hat - 1) < 0.2;
    return o;
}

Outcome nonplanar_tadpole_criterion() {
    Outcome o;
    double worst = 0;
    for (double q = 0.1; q <= 1.0 + 1e-9; q *= std::pow(10.0, 0.125))
        worst = std::max(worst, nonplanar_tadpole(q, 1.0, 1.0, 1.0).rel_err);
    std::vector<double> xs, ys;
    for (double q = 1e-3; q < 1.2e-2; q *= 1.5) {
        xs.push_back(std::log(q));
        ys.push_back(std::log(nonplanar_tadpole(q, 1.0, 1.0, 1.0).closed_form));
    }
    double slope = fit_line(xs, ys).slope;
    o.pass = worst < 0.01 && std::abs(slope + 2.0) < 0.1;
    char buf[96];
    std::snprintf(buf, sizeof buf, "rel err %.2e, slope %.3f", worst, slope);
    o.detail = buf;
    return o;
}

Outcome gn_tadpole_criterion() {
    Outcome o;
    KernelParams p;
    std::vector<double> xs, ys;
    for (int rho = 2; rho <= 8; ++rho) {
        xs.push_back(rho);
        ys.push_back(gn_tadpole_coefficient(GnTadpoleKind::PlanarRegular, p, rho));
    }
    LineFit f = fit_line(xs, ys);
    double d1 = std::abs(gn_tadpole_coefficient(GnTadpoleKind::Nonplanar, p, 7) -
                         gn_tadpole_coefficient(GnTadpoleKind::Nonplanar, p, 6));
    double d2 = std::abs(gn_tadpole_coefficient(GnTadpoleKind::Nonplanar, p, 8) -
                         gn_tadpole_coefficient(GnTadpoleKind::Nonplanar, p, 7));
    o.pass = f.r2 > 0.99 && d2 < d1 && d2 < 1e-4;
    char buf[96];
    std::snprintf(buf, sizeof buf, "affine r2 = %.5f, cauchy gap %.1e", f.r2, d2);
    o.detail = buf;
    return o;
}

Outcome moyal_identities() {
    Outcome o;
    double theta = 1.0;
    // e-rule exact
    auto prod = star_matrix(MatrixBaseElement::unit(8, theta, 1, 2),
                            MatrixBaseElement::unit(8, theta, 2, 5));
    for (int m = 0; m < 8; ++m)
        for (int n = 0; n < 8; ++n) {
            cplx want = (m == 1 && n == 5) ? cplx(1, 0) : cplx(0, 0);
            if (prod.at(m, n) != want) {
                o.pass = false;
                o.detail = "e-rule";
                return o;
            }
        }
    // f00 idempotent pointwise to 1e-8
    auto f00 = [&](const Vec2& x) { return fmn_eval(0, 0, x, theta); };
    for (Vec2 x : {Vec2{{0, 0}}, Vec2{{0.4, -0.3}}, Vec2{{-0.2, 0.6}}}) {
        if (std::abs(star_x(f00, f00, x, theta, 0, 48) - f00(x)) > 1e-8) {
            o.pass = false;
            o.detail = "idempotence";
            return o;
        }
    }
    // trace normalization to 1e-4 relative
    double L = std::sqrt(theta) * (4.0 + std::sqrt(2.0 * 8));
    int n = 220;
    double h = 2 * L / n;
    for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k) {
            cplx acc = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    acc += fmn_eval(m, k, {{-L + (i + 0.5) * h, -L + (j + 0.5) * h}}, theta);
            acc *= h * h;
            double want = (m == k) ? 2 * M_PI * theta : 0.0;
            if (std::abs(acc - want) > 1e-4 * 2 * M_PI * theta) {
                o.pass = false;
                o.detail = "trace normalization";
                return o;
            }
        }
    // positivity on 100 random hermitian elements
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1, 1);
    for (int s = 0; s < 100; ++s) {
        auto a = MatrixBaseElement::zero(8, theta);
        for (int m = 0; m < 8; ++m) {
            a.at(m, m) = dist(rng);
            for (int nn = m + 1; nn < 8; ++nn) {
                a.at(m, nn) = cplx(dist(rng), dist(rng));
                a.at(nn, m) = std::conj(a.at(m, nn));
            }
        }
        if (quartic_trace(a) < 0) {
            o.pass = false;
            o.detail = "positivity";
            return o;
        }
    }
    return o;
}

Outcome fierz_criterion() {
    Outcome o;
    auto g1 = fierz_g_matrix(1), g2 = fierz_g_matrix(2), g3 = fierz_g_matrix(3);
    double want1[4] = {-2, 0, 0, 0}, want2[4] = {-1, 1, 1, 1}, want3[4] = {-1, 1, 1, -1};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (g1[a][b] != (a == b ? want1[a] : 0.0) ||
                g2[a][b] != (a == b ? want2[a] : 0.0) ||
                g3[a][b] != (a == b ? want3[a] : 0.0)) {
                o.pass = false;
                o.detail = "table mismatch";
                return o;
            }
        }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(-1, 1);
    double worst = 0;
    for (int s = 0; s < 100; ++s) {
        Mat2 m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.e[i][j] = cplx(dist(rng), dist(rng));
        worst = std::max(worst, (fierz_reconstruct(fierz_decompose(m)) - m).max_abs());
    }
    o.pass = worst < 1e-12;
    char buf[64];
    std::snprintf(buf, sizeof buf, "reconstruction %.1e", worst);
    o.detail = buf;
    return o;
}

Outcome attribution_scan_criterion() {
    Outcome o;
    RegimeParams p4{4, 2, 2};
    auto rb = attribution_scan(bubble(), 8, Regime::Commutative, p4);
    auto rc = attribution_scan(convergent_sixpoint(), 8, Regime::Commutative, p4);
    o.pass = rb.affine_r2 > 0.999 && !rb.convergent && rc.convergent &&
             rc.ratio <= std::pow(2.0, -1.0 / 3.0) + 0.05;
    char buf[96];
    std::snprintf(buf, sizeof buf, "bubble r2 %.4f, sixpoint ratio %.3f", rb.affine_r2,
                  rc.ratio);
    o.detail = buf;
    return o;
}

Outcome power_counting_tables() {
    Outcome o;
    RegimeParams p4{4, 2, 2};
    for (int orient = 0; orient <= 1; ++orient)
        for (int g = 0; g <= 1; ++g)
            for (int B = 1; B <= 2; ++B)
                for (int N = 2; N <= 6; N += 2) {
                    Component c;
                    c.n_vertices = 3;
                    c.N = N;
                    c.genus = g;
                    c.broken_faces = B;
                    c.orientable = orient;
                    // commutative: (4-D)n + (D-2)/2 N - D
                    if (omega_of(c, Regime::Commutative, p4).omega != N - 4) {
                        o.pass = false;
                        o.detail = "commutative";
                        return o;
                    }
                    // x-space quartic table
                    int expect_phi4;
                    if (!orient)
                        expect_phi4 = N;
                    else if (g >= 1)
                        expect_phi4 = N + 4;
                    else if (B >= 2)
                        expect_phi4 = N;
                    else
                        expect_phi4 = N - 4;
                    if (omega_of(c, Regime::Phi4X, p4).omega != expect_phi4) {
                        o.pass = false;
                        o.detail = "phi4_x";
                        return o;
                    }
                    // fermionic table (critical flag false here)
                    int expect_gn;
                    if (g >= 1)
                        expect_gn = N + 4;
                    else if (N == 4 && B == 2)
                        expect_gn = N;
                    else
                        expect_gn = N - 4;
                    if (omega_of(c, Regime::GrossNeveuX, p4).omega != expect_gn) {
                        o.pass = false;
                        o.detail = "gn_x";
                        return o;
                    }
                    // critical variant
                    if (N == 4 && g == 0 && B == 2 &&
                        omega_of(c, Regime::GrossNeveuX, p4, true).omega != 0) {
                        o.pass = false;
                        o.detail = "gn_x critical";
                        return o;
                    }
                    // matrix tables
                    if (omega_of(c, Regime::MatrixPhi4, p4).omega !=
                        (4 - N) - 4 * (2 * g + B - 1)) {
                        o.pass = false;
                        o.detail = "matrix_phi4";
                        return o;
                    }
                    if (omega_of(c, Regime::MatrixGeneral, p4).omega !=
                        -((4 - N) - 4 * (2 * g + B - 1))) {
                        o.pass = false;
                        o.detail = "matrix_general";
                        return o;
                    }
                }
    return o;
}

}  // namespace

int main() {
    run(1, "topology fixtures", topology_fixtures);
    run(2, "forest enumeration", eye_forests);
    run(3, "forest classification lemma", forest_classification);
    run(4, "rosette oracle", rosette_oracle);
    run(5, "intersection rank", intersection_rank_criterion);
    run(6, "masselotte determinant", masselotte_criterion);
    run(7, "matrix propagator inversion", matrix_inversion);
    run(8, "scaling exponents", scaling_exponents);
    run(9, "nonplanar tadpole", nonplanar_tadpole_criterion);
    run(10, "planar tadpole regularization", gn_tadpole_criterion);
    run(11, "moyal identity suite", moyal_identities);
    run(12, "fierz table", fierz_criterion);
    run(13, "attribution scan", attribution_scan_criterion);
    run(14, "power-counting tables", power_counting_tables);
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
