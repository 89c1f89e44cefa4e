#include "superl/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "superl/blowup.hpp"
#include "superl/diagnostics.hpp"
#include "superl/errors.hpp"
#include "superl/exact.hpp"
#include "superl/io.hpp"
#include "superl/solver.hpp"
#include "superl/svg.hpp"

namespace superl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputeError("cannot write " + path.string());
    out << text;
}

void write_manifest(const fs::path& dir,
                    const std::map<std::string, std::string>& config,
                    const Grid* grid) {
    write_text(dir / "manifest.json", make_manifest(config, grid).dump(2) + "\n");
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    return dir;
}

double cfg_double(const std::map<std::string, std::string>& cfg,
                  const std::string& key, double fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: " + it->second);
    }
}

int cfg_int(const std::map<std::string, std::string>& cfg, const std::string& key,
            int fallback) {
    double v = cfg_double(cfg, key, fallback);
    if (v != std::floor(v)) throw ConfigError("config key " + key + ": not an integer");
    return static_cast<int>(v);
}

Domain domain_from_config(const std::map<std::string, std::string>& cfg) {
    std::string kind = cfg.count("domain.kind") ? cfg.at("domain.kind") : "disk";
    Vec2 c{cfg_double(cfg, "domain.center.x", 0.0),
           cfg_double(cfg, "domain.center.y", 0.0)};
    if (kind == "disk") return Domain::disk(c, cfg_double(cfg, "domain.radius", 0.5));
    if (kind == "annulus")
        return Domain::annulus(c, cfg_double(cfg, "domain.r_inner", 0.25),
                               cfg_double(cfg, "domain.r_outer", 1.0));
    if (kind == "rectangle")
        return Domain::rectangle({cfg_double(cfg, "domain.lo.x", -0.5),
                                  cfg_double(cfg, "domain.lo.y", -0.5)},
                                 {cfg_double(cfg, "domain.hi.x", 0.5),
                                  cfg_double(cfg, "domain.hi.y", 0.5)});
    throw ConfigError("unknown domain.kind: " + kind);
}

BubbleParams case_params(const std::string& kase, double lambda, double beta,
                         double mu) {
    BubbleParams p;
    p.lam = lambda;
    if (kase == "liouville") {
        p.kind = BubbleKind::Liouville;
    } else if (kase == "conical") {
        p.kind = BubbleKind::Conical;
        p.beta = beta;
    } else if (kase == "yamabe") {
        p.kind = BubbleKind::Yamabe;
        p.mu = mu;
    } else {
        throw ConfigError("unknown --case: " + kase);
    }
    return p;
}

Vec2 family_center(const FamilySpec& spec) {
    if (!spec.bubbles.empty()) return spec.bubbles.front().center;
    Vec2 lo, hi;
    spec.domain.bounds(lo, hi);
    return (lo + hi) * 0.5;
}

std::map<std::string, std::string> flag_config(
    std::initializer_list<std::pair<std::string, std::string>> kv) {
    return {kv.begin(), kv.end()};
}

std::string fmt(double v) { return format_double(v); }

// --- subcommand payloads -------------------------------------------------

struct VerifyOpts {
    std::string kase = "liouville";
    double lambda = 2.0, beta = 0.5, mu = -0.5, h = 1.0 / 128.0, radius = 1.0;
    std::string out;
};

int run_verify_exact(const VerifyOpts& o) {
    Domain dom = Domain::disk({0.0, 0.0}, o.radius);
    GridPtr g = make_grid(dom, o.h);
    BubbleParams p = case_params(o.kase, o.lambda, o.beta, o.mu);
    auto [u, psi] = make_bubble(p, g);
    CouplingField F = CouplingField::constant(o.mu);
    SystemResiduals res = residuals(u, psi, F);

    // the cone point breaks smoothness; grade the conical residual away from it
    double rmin = o.kase == "conical" ? std::max(0.1 * o.radius, 4.0 * o.h) : 0.0;
    double res_inf = 0.0;
    for (std::size_t idx = 0; idx < g->size(); ++idx) {
        if (g->kind(idx) != NodeKind::Interior) continue;
        if (g->coord(idx).norm() < rmin) continue;
        if (!res.res_u.is_vanished())
            res_inf = std::max(res_inf, std::abs(res.res_u[idx]));
        res_inf = std::max(res_inf, std::sqrt(res.res_psi.norm2(idx)));
    }
    std::optional<SingularMark> mark;
    if (o.kase == "conical") mark = SingularMark{{0.0, 0.0}, -2.0 * o.beta};
    double mass = local_mass(u, psi, {0.0, 0.0}, o.radius, mark);

    json result = {{"case", o.kase},   {"lambda", o.lambda},
                   {"h", o.h},         {"radius", o.radius},
                   {"residual_inf", res_inf}, {"mass_B1", mass}};
    if (o.kase == "conical") result["beta"] = o.beta;
    if (o.kase == "yamabe") result["mu"] = o.mu;

    fs::path dir = ensure_out_dir(o.out);
    write_text(dir / "verify_exact.json", result.dump(2) + "\n");
    write_manifest(dir,
                   flag_config({{"subcommand", "verify-exact"},
                                {"case", o.kase},
                                {"lambda", fmt(o.lambda)},
                                {"beta", fmt(o.beta)},
                                {"mu", fmt(o.mu)},
                                {"h", fmt(o.h)},
                                {"radius", fmt(o.radius)}}),
                   g.get());
    std::cout << result.dump(2) << "\n";
    return 0;
}

struct PohozaevOpts {
    std::string kase = "conical";
    double lambda = 1.0, beta = 0.5, mu = -0.5, h = 1.0 / 128.0, domain_radius = 1.0;
    std::vector<double> radii = {0.25, 0.5, 0.75};
    std::string out;
};

int run_pohozaev(const PohozaevOpts& o) {
    Domain dom = Domain::disk({0.0, 0.0}, o.domain_radius);
    GridPtr g = make_grid(dom, o.h);
    BubbleParams p = case_params(o.kase, o.lambda, o.beta, o.mu);
    auto [u, psi] = make_bubble(p, g);
    CouplingField F = CouplingField::constant(o.mu);
    std::optional<SingularMark> mark;
    if (o.kase == "conical") mark = SingularMark{{0.0, 0.0}, -2.0 * o.beta};

    std::string csv = "radius,pohozaev\n";
    for (double r : o.radii) {
        double c = pohozaev_constant(u, psi, F, {0.0, 0.0}, r, mark);
        csv += fmt(r) + "," + fmt(c) + "\n";
    }
    fs::path dir = ensure_out_dir(o.out);
    write_text(dir / "pohozaev.csv", csv);
    write_manifest(dir,
                   flag_config({{"subcommand", "pohozaev"},
                                {"case", o.kase},
                                {"lambda", fmt(o.lambda)},
                                {"beta", fmt(o.beta)},
                                {"mu", fmt(o.mu)},
                                {"h", fmt(o.h)},
                                {"domain_radius", fmt(o.domain_radius)}}),
                   g.get());
    std::cout << csv;
    return 0;
}

struct SolveOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out = "out";
    bool plot = false;
};

int run_solve(const SolveOpts& o) {
    std::map<std::string, std::string> cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    for (const std::string& s : o.sets) {
        auto overrides = parse_config(s);
        for (auto& [k, v] : overrides) cfg[k] = v;
    }

    Domain dom = domain_from_config(cfg);
    double h = cfg_double(cfg, "h", 1.0 / 128.0);
    GridPtr g = make_grid(dom, h);
    double mu = cfg_double(cfg, "mu", -0.5);
    double bc_value = cfg_double(cfg, "bc.u", 0.0);
    SolverConfig sc;
    sc.tol = cfg_double(cfg, "solver.tol", sc.tol);
    sc.max_iter = cfg_int(cfg, "solver.max_iter", sc.max_iter);

    ScalarField u0(g, cfg_double(cfg, "init.u", bc_value));
    SpinorField psi0(g);
    CouplingField F = CouplingField::constant(mu);
    SolveResult result =
        newton_solve(u0, psi0, F, [bc_value](Vec2) { return bc_value; },
                     [](Vec2) { return SpinorValue{0.0, 0.0}; }, sc);

    fs::path dir = ensure_out_dir(o.out);
    write_fields(dir / "fields.json", result.u, result.psi);
    write_text(dir / "solve_report.json", to_json(result.report).dump(2) + "\n");
    cfg["subcommand"] = "solve";
    write_manifest(dir, cfg, g.get());
    if (o.plot)
        write_text(dir / "u_heatmap.svg",
                   svg_heatmap(*g, result.u.values(), "solved u"));
    std::cout << to_json(result.report).dump(2) << "\n";
    if (!result.report.converged) {
        std::cerr << "solver did not converge\n";
        return 1;
    }
    return 0;
}

struct BlowupOpts {
    std::string family_path;
    int n_max = -1;
    std::string out = "out";
    bool plot = false;
};

int run_blowup(const BlowupOpts& o) {
    FamilySpec spec = load_family_spec(o.family_path);
    if (o.n_max >= 0) {
        spec.n_max = o.n_max;
        spec.validate();
    }
    AuditReport audit = energy_identity_audit(spec);

    fs::path dir = ensure_out_dir(o.out);
    std::string csv = audit_csv(audit);
    write_text(dir / "blowup.csv", csv);
    write_text(dir / "blowup.json", to_json(audit).dump(2) + "\n");
    write_manifest(dir,
                   flag_config({{"subcommand", "blowup"},
                                {"family", family_spec_to_json(spec).dump()},
                                {"n_max", std::to_string(spec.n_max)}}),
                   nullptr);
    if (o.plot) {
        PlotSeries mass{"local_mass", {}, {}}, neck{"neck_sup", {}, {}},
            de{"defect_e2u", {}, {}}, dp{"defect_psi4", {}, {}};
        for (const AuditRow& row : audit.rows) {
            mass.xs.push_back(row.n);
            mass.ys.push_back(row.local_mass);
            neck.xs.push_back(row.n);
            neck.ys.push_back(row.neck_sup);
            de.xs.push_back(row.n);
            de.ys.push_back(std::abs(row.defect_e2u));
            dp.xs.push_back(row.n);
            dp.ys.push_back(std::abs(row.defect_psi4));
        }
        write_text(dir / "mass_vs_n.svg", svg_line_plot("local mass vs n", {mass}));
        write_text(dir / "audit_vs_n.svg",
                   svg_line_plot("neck sup and |defects| vs n", {neck, de, dp}));
    }
    std::cout << csv;
    return 0;
}

FamilySpec canned_family(const std::string& kase) {
    FamilySpec spec;
    spec.domain = Domain::disk({0.0, 0.0}, 1.0);
    spec.h = 1.0 / 64.0;
    if (kase == "a") {  // small constant level: locally bounded, Sigma empty
        spec.background = Background{0.25, 0.0};
        spec.n_min = 0;
        spec.n_max = 5;
    } else if (kase == "b") {  // u_n = -n: uniform divergence, Sigma empty
        spec.background = Background{0.0, 1.0};
        spec.n_min = 10;
        spec.n_max = 25;
    } else if (kase == "c") {  // Liouville bubbles: concentration at the origin
        BubbleTemplate b;
        b.kind = BubbleKind::Liouville;
        b.lambda0 = 1.0;
        b.growth = 2.0;
        spec.bubbles.push_back(b);
        spec.n_min = 30;
        spec.n_max = 40;
    } else {
        throw ConfigError("unknown --case: " + kase + " (expected a, b, or c)");
    }
    return spec;
}

struct ClassifyOpts {
    std::string kase;
    std::string family_path;
    double epsilon1 = 0.1;
    std::string out = "out";
};

int run_classify(const ClassifyOpts& o) {
    if (o.kase.empty() == o.family_path.empty())
        throw ConfigError("classify needs exactly one of --case or --family");
    FamilySpec spec =
        o.family_path.empty() ? canned_family(o.kase) : load_family_spec(o.family_path);

    GridPtr g = make_grid(spec.domain, spec.h);
    std::vector<FamilyMember> family;
    family.reserve(spec.n_max - spec.n_min + 1);
    for (int n = spec.n_min; n <= spec.n_max; ++n)
        family.push_back(generate_family(spec, n, g));

    BMClassification bm = brezis_merle_classify(family, o.epsilon1);
    Vec2 center = family_center(spec);
    SingularityReport sing = classify_singularity(
        family, Domain::disk(center, 0.45 * spec.domain.min_extent()), 10.0);

    json result = {{"bm", to_json(bm)}, {"singularity", to_json(sing)}};
    fs::path dir = ensure_out_dir(o.out);
    write_text(dir / "classify.json", result.dump(2) + "\n");
    write_manifest(dir,
                   flag_config({{"subcommand", "classify"},
                                {"case", o.kase},
                                {"family", o.family_path.empty()
                                               ? family_spec_to_json(spec).dump()
                                               : o.family_path},
                                {"epsilon1", fmt(o.epsilon1)}}),
                   g.get());
    std::cout << result.dump(2) << "\n";
    return 0;
}

struct ReportOpts {
    std::string family_path;
    std::vector<double> center;
    double pohozaev_radius = 0.0, mass_delta = 0.0, neck_rmin = 0.0, mu = 0.0;
    bool have_mu = false;
    std::string out = "out";
    bool plot = false;
};

int run_report(const ReportOpts& o) {
    FamilySpec spec = load_family_spec(o.family_path);
    GridPtr g = make_grid(spec.domain, spec.h);
    std::vector<FamilyMember> family;
    for (int n = spec.n_min; n <= spec.n_max; ++n)
        family.push_back(generate_family(spec, n, g));

    Vec2 center = family_center(spec);
    if (o.center.size() == 2) center = {o.center[0], o.center[1]};
    double half = 0.5 * spec.domain.min_extent();
    double pr = o.pohozaev_radius > 0 ? o.pohozaev_radius : 0.35 * half;
    double md = o.mass_delta > 0 ? o.mass_delta : 0.5 * half;
    double nr = o.neck_rmin > 0 ? o.neck_rmin : 8.0 * spec.h;
    double mu = -0.5;
    for (const auto& b : spec.bubbles)
        if (b.kind == BubbleKind::Yamabe) mu = b.mu;
    if (o.have_mu) mu = o.mu;

    FamilyReport rep =
        family_report(family, CouplingField::constant(mu), center, pr, md, nr);
    std::string csv = report_csv(rep);
    fs::path dir = ensure_out_dir(o.out);
    write_text(dir / "report.csv", csv);
    write_text(dir / "report.json", to_json(rep).dump(2) + "\n");
    write_manifest(dir,
                   flag_config({{"subcommand", "report"},
                                {"family", family_spec_to_json(spec).dump()},
                                {"center.x", fmt(center.x)},
                                {"center.y", fmt(center.y)},
                                {"pohozaev_radius", fmt(pr)},
                                {"mass_delta", fmt(md)},
                                {"neck_rmin", fmt(nr)},
                                {"mu", fmt(mu)}}),
                   g.get());
    if (o.plot) {
        PlotSeries mass{"mass", {}, {}}, poh{"pohozaev", {}, {}};
        for (const FamilyReportRow& row : rep.rows) {
            mass.xs.push_back(row.index);
            mass.ys.push_back(row.mass);
            poh.xs.push_back(row.index);
            poh.ys.push_back(row.pohozaev);
        }
        write_text(dir / "report_vs_n.svg",
                   svg_line_plot("mass and pohozaev vs index", {mass, poh}));
    }
    std::cout << csv;
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"superl: numerical laboratory for the super-Liouville system"};
    app.require_subcommand(1);
    // --h is a grid-spacing option below, so help must not claim the short form
    app.set_help_flag("--help", "print usage");
    auto sub = [&](const char* name, const char* desc) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->set_help_flag("--help", "print usage");
        return s;
    };

    VerifyOpts vo;
    CLI::App* verify =
        sub("verify-exact", "check a catalog solution against its closed forms");
    verify->add_option("--case", vo.kase, "liouville, conical, or yamabe");
    verify->add_option("--lambda", vo.lambda, "bubble scale");
    verify->add_option("--beta", vo.beta, "cone order (conical)");
    verify->add_option("--mu", vo.mu, "coupling constant (yamabe)");
    verify->add_option("--h", vo.h, "grid spacing");
    verify->add_option("--radius", vo.radius, "disk domain radius");
    verify->add_option("--out", vo.out, "output directory");

    PohozaevOpts po;
    CLI::App* poh =
        sub("pohozaev", "Pohozaev constants of a catalog solution across radii");
    poh->add_option("--case", po.kase, "liouville, conical, or yamabe");
    poh->add_option("--lambda", po.lambda, "bubble scale");
    poh->add_option("--beta", po.beta, "cone order (conical)");
    poh->add_option("--mu", po.mu, "coupling constant (yamabe)");
    poh->add_option("--radii", po.radii, "comma-separated radii")->delimiter(',');
    poh->add_option("--h", po.h, "grid spacing");
    poh->add_option("--domain-radius", po.domain_radius, "disk domain radius");
    poh->add_option("--out", po.out, "output directory");

    SolveOpts so;
    CLI::App* solve = sub("solve", "damped Newton on the coupled system from a config");
    solve->add_option("--config", so.config_path, "key=value config file");
    solve->add_option("--set", so.sets, "override, e.g. --set h=0.0078125");
    solve->add_option("--out", so.out, "output directory");
    solve->add_flag("--plot", so.plot, "emit SVG heatmap of u");

    BlowupOpts bo;
    CLI::App* blow = sub("blowup", "energy-identity audit of a synthetic family");
    blow->add_option("--family", bo.family_path, "FamilySpec JSON file")->required();
    blow->add_option("--n-max", bo.n_max, "override the spec's last index");
    blow->add_option("--out", bo.out, "output directory");
    blow->add_flag("--plot", bo.plot, "emit SVG plots of the audit");

    ClassifyOpts co;
    CLI::App* cls = sub("classify", "Brezis-Merle and singularity-type classification");
    cls->add_option("--case", co.kase, "canned family: a, b, or c");
    cls->add_option("--family", co.family_path, "FamilySpec JSON file");
    cls->add_option("--epsilon1", co.epsilon1, "concentration threshold");
    cls->add_option("--out", co.out, "output directory");

    ReportOpts ro;
    CLI::App* rep = sub("report", "per-index diagnostics table for a synthetic family");
    rep->add_option("--family", ro.family_path, "FamilySpec JSON file")->required();
    rep->add_option("--center", ro.center, "diagnostic center x,y")
        ->delimiter(',')
        ->expected(2);
    rep->add_option("--pohozaev-radius", ro.pohozaev_radius, "contour radius");
    rep->add_option("--mass-delta", ro.mass_delta, "local-mass ball radius");
    rep->add_option("--neck-rmin", ro.neck_rmin, "innermost neck annulus");
    rep->add_option("--mu", ro.mu, "coupling constant for the Pohozaev term");
    rep->add_option("--out", ro.out, "output directory");
    rep->add_flag("--plot", ro.plot, "emit SVG plots of the table");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return run_verify_exact(vo);
        if (poh->parsed()) return run_pohozaev(po);
        if (solve->parsed()) return run_solve(so);
        if (blow->parsed()) return run_blowup(bo);
        if (cls->parsed()) return run_classify(co);
        if (rep->parsed()) {
            ro.have_mu = rep->count("--mu") > 0;
            return run_report(ro);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        std::cerr << "compute error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace superl
