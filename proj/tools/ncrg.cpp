// Command-line front door: ingest graph/config files, dispatch analyses,
// emit JSON/CSV/text reports.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncrg/forests.hpp"
#include "ncrg/graph_json.hpp"
#include "ncrg/kernels.hpp"
#include "ncrg/moyal.hpp"
#include "ncrg/multiscale.hpp"
#include "ncrg/ribbon.hpp"
#include "ncrg/rosette.hpp"
#include "ncrg/version.hpp"

using njson = nlohmann::ordered_json;
using namespace ncrg;

namespace {

struct CommonOptions {
    std::string input;
    std::string output;
    std::string format = "json";
    double theta = 1.0;
    double omega = 0.8;
    double b_field = 0.0;
    double mass = 1.0;
    double slice_base = 2.0;
    int dimension = 2;
    int truncation = 40;
    int i_max = 6;
    uint64_t seed = 0;
    int samples = 100;
};

KernelParams kernel_params(const CommonOptions& o) {
    KernelParams p;
    p.theta = o.theta;
    p.omega = o.omega;
    p.b_field = o.b_field;
    p.mass = o.mass;
    p.slice_base = o.slice_base;
    p.dimension = o.dimension;
    return p;
}

njson config_json(const CommonOptions& o, const std::string& command) {
    njson c;
    c["command"] = command;
    if (!o.input.empty()) c["input"] = o.input;
    c["theta"] = o.theta;
    c["omega"] = o.omega;
    c["b"] = o.b_field;
    c["mass"] = o.mass;
    c["slice_base"] = o.slice_base;
    c["dimension"] = o.dimension;
    c["truncation"] = o.truncation;
    c["i_max"] = o.i_max;
    c["seed"] = o.seed;
    c["samples"] = o.samples;
    return c;
}

void emit(const CommonOptions& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(o.output);
        if (!out) throw std::invalid_argument("cannot open output file: " + o.output);
        out << text << "\n";
    }
}

void emit_report(const CommonOptions& o, const std::string& command, njson results,
                 njson diagnostics = njson::object()) {
    njson rep;
    rep["version"] = kVersion;
    rep["config"] = config_json(o, command);
    rep["results"] = std::move(results);
    rep["diagnostics"] = std::move(diagnostics);
    if (o.format == "json") {
        emit(o, rep.dump(2));
    } else {
        // text: flat rendering
        std::ostringstream ss;
        ss << "ncrg " << kVersion << " :: " << command << "\n";
        ss << rep["results"].dump(2);
        emit(o, ss.str());
    }
}

const char* kind_name(VarKind k) {
    switch (k) {
        case VarKind::External: return "x";
        case VarKind::U: return "u";
        case VarKind::V: return "v";
        case VarKind::W: return "w";
        case VarKind::P: return "p";
        case VarKind::Corner: return "s";
    }
    return "?";
}

njson phase_terms_json(const std::vector<PhaseTerm>& terms, const char* op) {
    njson arr = njson::array();
    for (const auto& t : terms) {
        njson jt;
        jt["a"] = std::string(kind_name(t.a.kind)) + std::to_string(t.a.id);
        jt["b"] = std::string(kind_name(t.b.kind)) + std::to_string(t.b.id);
        jt["coeff_num"] = t.half;
        jt["coeff_den"] = 2;
        jt["op"] = op;
        arr.push_back(jt);
    }
    return arr;
}

njson topology_json(const Topology& t) {
    njson j;
    j["V"] = t.V;
    j["I"] = t.I;
    j["F"] = t.F;
    j["B"] = t.B;
    j["genus"] = t.genus;
    j["chi"] = t.chi;
    j["N"] = t.n_externals;
    return j;
}

ScaleAttribution attribution_of(const GraphInput& gi, double slice_base) {
    ScaleAttribution mu = ScaleAttribution::from_graph(gi.graph, slice_base);
    return mu;
}

int run_analyze(const CommonOptions& o) {
    GraphInput gi = load_graph_file(o.input);
    Topology t = topology(gi.graph);
    bool orient_flag = is_orientable(gi.graph);

    Component as_component;
    as_component.n_vertices = t.V;
    as_component.N = t.n_externals;
    as_component.genus = t.genus;
    as_component.broken_faces = t.B;
    as_component.orientable = orient_flag;

    njson omegas;
    RegimeParams rp;
    rp.dimension = gi.dimension;
    for (Regime r : {Regime::Commutative, Regime::Phi4X, Regime::GrossNeveuX,
                     Regime::MatrixPhi4, Regime::MatrixGeneral}) {
        RegimeParams use = rp;
        if (r == Regime::Commutative || r == Regime::MatrixGeneral) use.dimension = gi.dimension;
        OmegaVerdict v = omega_of(as_component, r, use);
        njson jv;
        jv["omega"] = v.omega;
        jv["divergent"] = v.divergent;
        omegas[regime_name(r)] = jv;
    }
    njson res;
    res["model"] = gi.model;
    res["topology"] = topology_json(t);
    res["orientable"] = orient_flag;
    res["omega_table"] = omegas;
    emit_report(o, "analyze", res);
    return 0;
}

int run_rosette(const CommonOptions& o, bool keep_deltas) {
    GraphInput gi = load_graph_file(o.input);
    auto tree = spanning_tree(gi.graph, TreeMode::Maximize);
    OrientedGraph og = orient(gi.graph, tree, default_root(gi.graph));
    RosetteFactor rf = rosette(og, keep_deltas);
    OracleReport orep = oracle_report(og, rf, o.samples, o.seed, o.theta);
    Topology t = topology(gi.graph);

    njson res;
    njson delta = njson::array();
    for (const auto& lt : rf.delta_arg) {
        njson jt;
        jt["var"] = std::string(kind_name(lt.v.kind)) + std::to_string(lt.v.id);
        jt["coeff"] = lt.coeff;
        delta.push_back(jt);
    }
    res["delta_argument"] = delta;
    res["phase"] = phase_terms_json(rf.phase, "wedge");
    if (!rf.dots.empty()) res["phase_dot"] = phase_terms_json(rf.dots, "dot");
    res["q_w_rank"] = intersection_rank(og, rf);
    res["genus"] = t.genus;
    res["orientable"] = og.orientable();
    njson diag;
    diag["oracle"] = {{"samples", orep.samples}, {"max_abs_error", orep.max_abs_error}};
    emit_report(o, "rosette", res, diag);
    return orep.max_abs_error < 1e-9 ? 0 : 2;
}

int run_scales(const CommonOptions& o, const std::string& regime_name_str, bool scan) {
    GraphInput gi = load_graph_file(o.input);
    for (const auto& e : gi.graph.edges())
        if (!e.scale)
            throw std::invalid_argument("scales: every edge needs a 'scale' field");
    Regime regime = regime_from_string(regime_name_str);
    RegimeParams rp;
    rp.dimension = gi.dimension;
    ScaleAttribution mu = attribution_of(gi, o.slice_base);
    ComponentTree tree = components(gi.graph, mu);
    auto verdicts = classify(gi.graph, mu, tree, regime, rp);

    njson comps = njson::array();
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        const Component& c = tree.nodes[i];
        njson jc;
        jc["edges"] = c.edges;
        jc["scale"] = c.scale;
        jc["external_scale"] = c.external_scale;
        jc["N"] = c.N;
        jc["genus"] = c.genus;
        jc["broken_faces"] = c.broken_faces;
        jc["orientable"] = c.orientable;
        jc["parent"] = c.parent;
        jc["omega"] = verdicts[i].omega;
        jc["divergent"] = verdicts[i].divergent;
        if (regime == Regime::GrossNeveuX) jc["critical"] = verdicts[i].critical;
        comps.push_back(jc);
    }
    njson res;
    res["regime"] = regime_name_str;
    res["components"] = comps;
    if (regime == Regime::GrossNeveuX)
        res["critical_rule"] =
            "a component with N=4, g=0, B=2 is critical when the first two-point "
            "ancestor in the component tree adds exactly one line and that line "
            "joins two external corners lying in one broken face of the component";

    if (scan) {
        ScanReport sr = attribution_scan(gi.graph, o.i_max, regime, rp, o.slice_base);
        if (o.format == "csv") {
            std::ostringstream csv;
            csv.precision(17);
            csv << "i_max,partial_sum,n_attributions\n";
            for (const auto& row : sr.rows)
                csv << row.i_max << "," << row.partial_sum << "," << row.n_attributions << "\n";
            emit(o, csv.str());
            return 0;
        }
        njson jscan;
        jscan["rows"] = njson::array();
        for (const auto& row : sr.rows)
            jscan["rows"].push_back({{"i_max", row.i_max},
                                     {"partial_sum", row.partial_sum},
                                     {"n_attributions", row.n_attributions}});
        jscan["convergent"] = sr.convergent;
        jscan["ratio"] = sr.ratio;
        jscan["affine_slope"] = sr.affine_slope;
        jscan["affine_r2"] = sr.affine_r2;
        res["scan"] = jscan;
    }
    emit_report(o, "scales", res);
    return 0;
}

int run_forests(const CommonOptions& o, bool four_point_only, bool classify_attr) {
    GraphInput gi = load_graph_file(o.input);
    auto scope = four_point_only ? DivergenceScope::FourPointOnly
                                 : DivergenceScope::TwoAndFourPoint;
    auto subs = divergent_subgraphs(gi.graph, scope);
    auto fs = all_forests(subs);

    njson res;
    njson jsubs = njson::array();
    for (const auto& s : subs) jsubs.push_back({{"edges", s.edges}, {"N", s.N}});
    res["divergent_subgraphs"] = jsubs;
    njson jf = njson::array();
    for (const auto& f : fs) jf.push_back(f);
    res["forests"] = jf;
    res["forest_count"] = fs.size();

    if (classify_attr) {
        bool have_scales = true;
        for (const auto& e : gi.graph.edges())
            if (!e.scale) have_scales = false;
        if (!have_scales)
            throw std::invalid_argument("forests --classify: every edge needs a 'scale' field");
        ScaleAttribution mu = attribution_of(gi, o.slice_base);
        njson table = njson::array();
        for (size_t fi = 0; fi < fs.size(); ++fi) {
            ForestSplit split = classify_forest(gi.graph, mu, subs, fs[fi]);
            njson row;
            row["forest"] = fs[fi];
            row["dangerous"] = split.dangerous;
            row["inoffensive"] = split.inoffensive;
            if (split.dangerous.empty())
                row["completion"] = completion(gi.graph, mu, subs, fs[fi]);
            table.push_back(row);
        }
        res["classification"] = table;
    }
    emit_report(o, "forests", res);
    return 0;
}

int run_kernels(const CommonOptions& o, const std::string& task, const std::string& model,
                double tadpole_p, int rho) {
    KernelParams p = kernel_params(o);
    njson res;
    if (task == "bounds") {
        SliceModel m;
        if (model == "phi4_matrix")
            m = SliceModel::Phi4Matrix;
        else if (model == "phi4_matrix_omega0")
            m = SliceModel::Phi4MatrixOmega0;
        else if (model == "gn_matrix")
            m = SliceModel::GnMatrix;
        else
            throw std::invalid_argument("kernels bounds: unknown model " + model);
        auto rep = slice_bound_report(p, 2, o.i_max, m);
        if (o.format == "csv") {
            std::ostringstream csv;
            csv.precision(17);
            csv << "model,i,max_abs,summed_bound\n";
            for (const auto& r : rep.rows)
                csv << model << "," << r.slice << "," << r.max_abs << "," << r.summed_max << "\n";
            csv << "# delta0_hat=" << rep.delta0_hat << " delta1_hat=" << rep.delta1_hat
                << " k0_cv=" << rep.k0_cv << " k1_cv=" << rep.k1_cv << "\n";
            emit(o, csv.str());
            return 0;
        }
        njson rows = njson::array();
        for (const auto& r : rep.rows)
            rows.push_back({{"i", r.slice}, {"max_abs", r.max_abs}, {"summed_bound", r.summed_max}});
        res["model"] = model;
        res["rows"] = rows;
        res["delta0_hat"] = rep.delta0_hat;
        res["delta1_hat"] = rep.delta1_hat;
        res["delta0_expected"] = rep.delta0_expected;
        res["delta1_expected"] = rep.delta1_expected;
        res["k0_cv"] = rep.k0_cv;
        res["k1_cv"] = rep.k1_cv;
    } else if (task == "tadpole") {
        auto r = nonplanar_tadpole(tadpole_p, o.mass, o.theta, 1.0);
        res["p"] = tadpole_p;
        res["closed_form"] = r.closed_form;
        res["quadrature"] = r.quadrature;
        res["rel_err"] = r.rel_err;
    } else if (task == "gn-tadpole") {
        njson rows = njson::array();
        for (int rr = 2; rr <= rho; ++rr) {
            njson row;
            row["rho"] = rr;
            row["planar_regular"] = gn_tadpole_coefficient(GnTadpoleKind::PlanarRegular, p, rr);
            if (p.omega != 1.0)
                row["planar_singular"] =
                    gn_tadpole_coefficient(GnTadpoleKind::PlanarSingular, p, rr);
            row["nonplanar"] = gn_tadpole_coefficient(GnTadpoleKind::Nonplanar, p, rr);
            rows.push_back(row);
        }
        res["rows"] = rows;
    } else if (task == "fierz") {
        for (int which = 1; which <= 3; ++which) {
            auto g = fierz_g_matrix(which);
            njson jm = njson::array();
            for (int a = 0; a < 4; ++a) jm.push_back({g[a][0], g[a][1], g[a][2], g[a][3]});
            res["g" + std::to_string(which)] = jm;
        }
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> dist(-1, 1);
        double worst = 0;
        for (int s = 0; s < 100; ++s) {
            Mat2 m;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) m.e[i][j] = cplx(dist(rng), dist(rng));
            Mat2 r = fierz_reconstruct(fierz_decompose(m));
            worst = std::max(worst, (r - m).max_abs());
        }
        res["reconstruction_max_err"] = worst;
    } else if (task == "propagator-check") {
        int T = o.truncation;
        double worst = 0;
        for (int h : {0, 1}) {
            std::vector<std::vector<double>> G(T, std::vector<double>(T, 0.0));
            for (int m = 0; m < T; ++m)
                for (int l = 0; l < T; ++l)
                    G[m][l] = matrix_propagator(MatrixIndex4::d2(m, m + h, l + h, l), p);
            for (int m = 0; m < T / 2; ++m)
                for (int l = 0; l < T / 2; ++l) {
                    double acc = 0;
                    for (int k = std::max(0, m - 1); k <= std::min(T - 1, m + 1); ++k)
                        acc += matrix_delta(MatrixIndex4::d2(m, m + h, k + h, k), p) * G[k][l];
                    worst = std::max(worst, std::abs(acc - (m == l ? 1.0 : 0.0)));
                }
        }
        res["truncation"] = T;
        res["residual_sup"] = worst;
    } else {
        throw std::invalid_argument("kernels: unknown task " + task);
    }
    emit_report(o, "kernels", res);
    return 0;
}

int run_moyal(const CommonOptions& o) {
    double th = o.theta;
    int T = std::min(o.truncation, 16);
    njson rows = njson::array();
    bool all_pass = true;
    auto add_row = [&](const std::string& name, double err, double tol) {
        bool pass = err < tol;
        all_pass = all_pass && pass;
        rows.push_back({{"identity", name}, {"error", err}, {"tolerance", tol},
                        {"pass", pass}});
    };

    {  // e_mn * e_kl = delta_nk e_ml (exact by construction; spot check)
        auto a = MatrixBaseElement::unit(T, th, 1, 2);
        auto b = MatrixBaseElement::unit(T, th, 2, 3);
        auto c = star_matrix(a, b);
        double err = std::abs(c.at(1, 3) - 1.0);
        auto d = star_matrix(a, MatrixBaseElement::unit(T, th, 1, 3));
        for (int m = 0; m < T; ++m)
            for (int n = 0; n < T; ++n) err = std::max(err, std::abs(d.at(m, n)));
        add_row("e_mn * e_kl = delta_nk e_ml", err, 1e-15);
    }
    {  // f00 idempotent pointwise via the integral star product
        auto f00 = [&](const Vec2& x) { return fmn_eval(0, 0, x, th); };
        double err = 0;
        for (Vec2 x : {Vec2{{0.0, 0.0}}, Vec2{{0.4, -0.3}}, Vec2{{-0.2, 0.6}}}) {
            cplx got = star_x(f00, f00, x, th, 0, 48);
            err = std::max(err, std::abs(got - f00(x)));
        }
        add_row("f00 * f00 = f00 (pointwise)", err, 1e-8);
    }
    {  // trace identity: int f_mn = 2 pi theta delta_mn
        double L = std::sqrt(th) * (4.0 + std::sqrt(2.0 * 6));
        int n = 256;
        double hstep = 2 * L / n;
        double err = 0;
        for (int m = 0; m < 3; ++m)
            for (int nn = 0; nn < 3; ++nn) {
                cplx acc = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Vec2 x{{-L + (i + 0.5) * hstep, -L + (j + 0.5) * hstep}};
                        acc += fmn_eval(m, nn, x, th);
                    }
                acc *= hstep * hstep;
                cplx want = (m == nn) ? cplx(2 * M_PI * th, 0) : cplx(0, 0);
                err = std::max(err, std::abs(acc - want) / (2 * M_PI * th));
            }
        add_row("int f_mn = 2 pi theta delta_mn (rel)", err, 1e-4);
    }
    {  // Landau eigenvalue identity on a grid
        double err = 0;
        for (int m : {0, 2})
            for (int n : {1, 3})
                for (Vec2 x : {Vec2{{0.3, 0.2}}, Vec2{{-0.5, 0.1}}}) {
                    cplx left = h_star_fmn(m, n, x, th, true);
                    cplx right = h_star_fmn(m, n, x, th, false);
                    err = std::max(err, std::abs(left - th * (m + 0.5) * fmn_eval(m, n, x, th)));
                    err = std::max(err, std::abs(right - th * (n + 0.5) * fmn_eval(m, n, x, th)));
                }
        add_row("H * f_mn = theta(m+1/2) f_mn", err, 1e-10);
    }
    {  // positivity of the quartic trace
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> dist(-1, 1);
        double worst = 0;
        for (int s = 0; s < 100; ++s) {
            auto a = MatrixBaseElement::zero(8, th);
            for (int m = 0; m < 8; ++m) {
                a.at(m, m) = dist(rng);
                for (int n = m + 1; n < 8; ++n) {
                    a.at(m, n) = cplx(dist(rng), dist(rng));
                    a.at(n, m) = std::conj(a.at(m, n));
                }
            }
            worst = std::min(worst, quartic_trace(a));
        }
        add_row("Tr(A^4) >= 0 (min over 100 random hermitian)", std::max(0.0, -worst), 1e-300);
    }
    njson res;
    res["identities"] = rows;
    res["all_pass"] = all_pass;
    emit_report(o, "moyal", res);
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ribbon-graph combinatorics and propagator numerics for renormalization on Moyal space"};
    app.require_subcommand(1);
    CommonOptions o;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input) cmd->add_option("input", o.input, "graph JSON file")->required();
        cmd->add_option("-o,--output", o.output, "output path (default stdout)");
        cmd->add_option("--format", o.format, "json|text|csv")
            ->check(CLI::IsMember({"json", "text", "csv"}));
        cmd->add_option("--theta", o.theta, "noncommutativity parameter");
        cmd->add_option("--omega", o.omega, "oscillator strength in [0,1]");
        cmd->add_option("--b", o.b_field, "angular-momentum coupling");
        cmd->add_option("--mass", o.mass, "mass");
        cmd->add_option("-M,--slice-base", o.slice_base, "slice base M > 1");
        cmd->add_option("-D,--dimension", o.dimension, "dimension 2 or 4");
        cmd->add_option("--trunc", o.truncation, "matrix truncation");
        cmd->add_option("--i-max", o.i_max, "largest slice index");
        cmd->add_option("--seed", o.seed, "random seed");
        cmd->add_option("--samples", o.samples, "oracle sample count");
    };

    auto* analyze = app.add_subcommand("analyze", "topology and power-counting table");
    add_common(analyze, true);

    auto* ros = app.add_subcommand("rosette", "rosette factor and vertex-sum oracle check");
    bool keep_deltas = false;
    add_common(ros, true);
    ros->add_flag("--keep-deltas", keep_deltas, "emit branch deltas as oscillating momenta");

    auto* scales = app.add_subcommand("scales", "component tree, verdicts, optional scan");
    std::string regime = "phi4_x";
    bool do_scan = false;
    add_common(scales, true);
    scales->add_option("--regime", regime,
                       "commutative|phi4_x|gn_x|matrix_phi4|matrix_general");
    scales->add_flag("--scan", do_scan, "attribution scan up to --i-max");

    auto* forests_cmd = app.add_subcommand("forests", "divergent forests and classification");
    bool four_only = false, classify_flag = false;
    add_common(forests_cmd, true);
    forests_cmd->add_flag("--four-point-only", four_only, "restrict to four-point subgraphs");
    forests_cmd->add_flag("--classify", classify_flag, "dangerous/inoffensive table");

    auto* kern = app.add_subcommand("kernels", "bound scans, tadpoles, fierz");
    std::string task = "bounds", model = "phi4_matrix";
    double tadpole_p = 0.5;
    int rho = 8;
    add_common(kern, false);
    kern->add_option("--task", task, "bounds|tadpole|gn-tadpole|fierz|propagator-check");
    kern->add_option("--model", model, "phi4_matrix|phi4_matrix_omega0|gn_matrix");
    kern->add_option("--p", tadpole_p, "external momentum for the nonplanar tadpole");
    kern->add_option("--rho", rho, "largest cutoff index for gn-tadpole");

    auto* moy = app.add_subcommand("moyal", "matrix-base identity self-test");
    add_common(moy, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return run_analyze(o);
        if (app.got_subcommand(ros)) return run_rosette(o, keep_deltas);
        if (app.got_subcommand(scales)) return run_scales(o, regime, do_scan);
        if (app.got_subcommand(forests_cmd)) return run_forests(o, four_only, classify_flag);
        if (app.got_subcommand(kern)) return run_kernels(o, task, model, tadpole_p, rho);
        if (app.got_subcommand(moy)) return run_moyal(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
