// univalens: command-line front end.
//
//   univalens check   --f EXPR [--variant NAME] [params] [--json] [--out PATH]
//   univalens map     --f EXPR [--beta C] --rings N --rays N --svg PATH
//   univalens chain   --f EXPR [params] [--t t1,t2,...] [--k K]
//   univalens extend  --f EXPR [params] [--annulus rin:rout] [--k K] [--k-estimate]
//   univalens reproduce example1 [--out DIR]
//
// Exit codes: 0 satisfied, 1 violated, 2 input error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "univalens/univalens.hpp"

namespace {

using namespace univalens;
using report::json;
using Clock = std::chrono::steady_clock;

struct Common {
    std::string f;
    std::string g;
    std::string h;
    std::string alpha = "0";
    std::string beta = "1";
    double m = 1.0;
    std::optional<double> k;
    std::string variant = "general";
    std::string first_center = "proof";
    std::string grid;
    std::string out;
    bool json = false;
    bool timing = false;

    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* m_opt = nullptr;
};

void add_common(CLI::App* app, Common& c, bool f_required = true) {
    auto* f = app->add_option("--f", c.f, "analytic function of z, e.g. \"z/(1 - z^2/2)\"");
    if (f_required) f->required();
    app->add_option("--g", c.g, "expression or preset (zero, fprime, fsecond, schwarz_h, quotient_squared, ozaki_h)");
    app->add_option("--h", c.h, "expression or preset");
    c.alpha_opt = app->add_option("--alpha", c.alpha, "complex, Re alpha < 1/2 (a+bi)");
    c.beta_opt = app->add_option("--beta", c.beta, "complex, Re beta > 0 (a+bi)");
    c.m_opt = app->add_option("--m", c.m, "real m > 0");
    app->add_option("--k", c.k, "quasiconformality constant in [0, 1)");
    app->add_option("--variant", c.variant, "criterion variant");
    app->add_option("--first-center", c.first_center, "proof | printed")->check(CLI::IsMember({"proof", "printed"}));
    app->add_option("--grid", c.grid, "nr=N,ntheta=N,rmin=R,rmax=R");
    app->add_option("--out", c.out, "write the JSON report to PATH");
    app->add_flag("--json", c.json, "print the JSON report on standard output");
    app->add_flag("--timing", c.timing, "record wall time in the report (otherwise 0)");
}

criteria::GridSpec grid_of(const Common& c) { return c.grid.empty() ? criteria::GridSpec{} : report::parse_grid(c.grid); }

expr::FunctionExpr parse_f(const std::string& text, const char* flag) {
    try {
        return expr::parse(text);
    } catch (const Error& e) {
        throw InvalidArgument(std::string(flag) + ": " + e.what());
    }
}

criteria::FnSource parse_source(const std::string& text, const char* flag) {
    try {
        return criteria::FnSource::parse(text);
    } catch (const Error& e) {
        throw InvalidArgument(std::string(flag) + ": " + e.what());
    }
}

/// Builds the resolved criterion; warns when the variant overrides a
/// parameter the user set explicitly.
criteria::Criterion criterion_of(const Common& c) {
    criteria::CriterionSpec spec;
    spec.variant = criteria::parse_variant(c.variant);
    spec.alpha = report::parse_complex(c.alpha, "--alpha");
    spec.beta = report::parse_complex(c.beta, "--beta");
    spec.m = c.m;
    spec.k = c.k;
    spec.first_center = c.first_center == "printed" ? criteria::FirstCenter::printed_form
                                                    : criteria::FirstCenter::proof_form;
    if (!c.g.empty()) spec.g = parse_source(c.g, "--g");
    if (!c.h.empty()) spec.h = parse_source(c.h, "--h");
    const criteria::Criterion res = criteria::resolve_preset(spec, parse_f(c.f, "--f"));
    auto warn = [&](CLI::Option* opt, const char* flag, bool changed) {
        if (opt && opt->count() > 0 && changed)
            std::cerr << "warning: variant " << criteria::name(spec.variant) << " fixes " << flag
                      << "; the given value is ignored\n";
    };
    warn(c.alpha_opt, "--alpha", res.alpha() != spec.alpha);
    warn(c.beta_opt, "--beta", res.beta() != spec.beta);
    warn(c.m_opt, "--m", res.m() != spec.m);
    return res;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw InvalidArgument("failed writing '" + path + "'");
}

int emit(const Common& c, const json& rep, const std::string& summary) {
    if (!c.out.empty()) write_file(c.out, report::dump(rep));
    if (c.json) std::cout << report::dump(rep);
    else std::cout << summary;
    return rep["overall"].get<bool>() ? 0 : 1;
}

std::string sup_line(const char* label, const criteria::SupReport& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: sup %.10g %s bound %.10g at %s -> %s\n", label, s.sup_estimate,
                  s.strict ? "<" : "<=", s.bound, to_string(s.argmax).c_str(), s.satisfied ? "holds" : "violated");
    return buf;
}

int run_check(const Common& c, std::optional<Clock::time_point> started) {
    const criteria::Criterion crit = criterion_of(c);
    const criteria::GridSpec grid = grid_of(c);
    const criteria::CriterionReport cr = criteria::check_criterion(crit, grid);
    json rep = report::make_report("check", report::spec_json(crit, grid));
    rep["condition1"] = report::to_json(cr.first);
    rep["condition2"] = report::to_json(cr.main);
    report::finish(rep, cr.overall, started);
    return emit(c, rep,
                sup_line("condition 1", cr.first) + sup_line("condition 2", cr.main) +
                    (cr.overall ? "criterion satisfied\n" : "criterion violated\n"));
}

int run_map(const Common& c, int rings, int rays, const std::string& svg_path,
            std::optional<Clock::time_point> started) {
    const expr::FunctionExpr f = parse_f(c.f, "--f");
    const cx beta = report::parse_complex(c.beta, "--beta");
    if (!(beta.real() > 0.0)) throw InvalidArgument("--beta: Re beta must be positive");
    const svg::MeshSpec mesh{rings, rays, 512};
    mesh.validate();
    svg::SvgScene scene;
    scene.panels.push_back(svg::render_map([&](cx z) { return f(z); }, mesh, "f"));
    scene.panels.push_back(
        svg::render_map([&](cx z) { return quad::integral_operator(f, beta, z); }, mesh, "F_beta"));
    write_file(svg_path, svg::to_svg(scene));

    json spec;
    spec["f"] = f.source();
    spec["beta"] = report::to_json(beta);
    json rep = report::make_report("map", spec);
    rep["map"] = json{{"svg", svg_path}, {"rings", rings}, {"rays", rays}, {"samples_per_curve", mesh.samples}};
    report::finish(rep, true, started);
    return emit(c, rep, "wrote " + svg_path + "\n");
}

int run_chain(const Common& c, const std::string& times, std::optional<Clock::time_point> started) {
    const criteria::Criterion crit = criterion_of(c);
    const std::vector<double> ts = times.empty() ? loewner::default_times() : report::parse_list(times, "--t");
    for (double t : ts)
        if (!(t >= 0.0)) throw InvalidArgument("--t: times must be non-negative");
    const loewner::ChainParams params = loewner::ChainParams::from(crit);
    const loewner::Chain chain(params);
    const loewner::ChainReport cr = loewner::verify_chain(params, loewner::default_points(), ts, c.k);
    json rep = report::make_report("chain", report::spec_json(crit, grid_of(c)));
    rep["chain"] = report::to_json(cr, ts, chain);
    report::finish(rep, cr.passed, started);
    char buf[256];
    std::snprintf(buf, sizeof buf, "chain: sup|w| %.10g over %lld samples, min Re p %.6g -> %s\n", cr.sup_abs_w,
                  static_cast<long long>(cr.samples), cr.min_re_p, cr.passed ? "passed" : "failed");
    return emit(c, rep, buf);
}

int run_extend(const Common& c, const std::string& annulus, bool k_estimate,
               std::optional<Clock::time_point> started) {
    const criteria::Criterion crit = criterion_of(c);
    const auto [r_in, r_out] = annulus.empty() ? std::pair{1.001, 5.0} : report::parse_annulus(annulus);
    const criteria::GridSpec grid = grid_of(c);
    json rep = report::make_report("extend", report::spec_json(crit, grid));
    json ext;
    ext["annulus"] = json{{"r_in", r_in}, {"r_out", r_out}};
    bool overall = true;
    std::string summary;
    std::optional<qcext::KEstimate> measured;
    if (crit.k()) {
        qcext::QcOptions opts;
        opts.r_in = r_in;
        opts.r_out = r_out;
        const qcext::QcReport qc = qcext::check_qc_criterion(crit, grid, opts);
        rep["condition1"] = report::to_json(qc.first);
        rep["condition2"] = report::to_json(qc.main);
        ext["conditions_hold"] = qc.conditions_hold;
        ext["cross_check_ok"] = qc.cross_check_ok ? json(*qc.cross_check_ok) : json(nullptr);
        measured = qc.measured;
        overall = qc.overall;
        summary += sup_line("condition 1", qc.first) + sup_line("condition 2", qc.main);
    }
    if (k_estimate || !crit.k()) {
        if (!measured) measured = qcext::estimate_k_detailed(qcext::ExtensionMap(loewner::ChainParams::from(crit)),
                                                             r_in, r_out);
        if (!crit.k()) overall = measured->k < 1.0;
    }
    if (measured) {
        ext["k_estimate"] = measured->k;
        ext["argmax"] = report::to_json(measured->argmax);
        ext["samples"] = measured->samples;
        char buf[128];
        std::snprintf(buf, sizeof buf, "measured sup|mu| = %.10g at %s\n", measured->k,
                      to_string(measured->argmax).c_str());
        summary += buf;
    }
    rep["extension"] = ext;
    report::finish(rep, overall, started);
    summary += overall ? "extension check passed\n" : "extension check failed\n";
    return emit(c, rep, summary);
}

int run_reproduce(const Common& c, const std::string& which, std::optional<Clock::time_point> started) {
    if (which != "example1") throw InvalidArgument("reproduce: unknown target '" + which + "' (example1)");
    const report::Example1 ex = report::reproduce_example1(grid_of(c), started);
    const std::filesystem::path dir = c.out.empty() ? "example1_out" : c.out;
    std::filesystem::create_directories(dir);
    write_file((dir / "report.json").string(), report::dump(ex.report));
    write_file((dir / "figure1.svg").string(), ex.figure1);
    write_file((dir / "figure2.svg").string(), ex.figure2);
    if (c.json) std::cout << report::dump(ex.report);
    else
        std::cout << "condition 1 sup " << ex.report["condition1"]["sup"].get<double>() << ", condition 2 sup "
                  << ex.report["condition2"]["sup"].get<double>() << "; outputs in " << dir.string() << "\n";
    for (const auto& f : ex.failures) std::cerr << "failed: " << f << "\n";
    return ex.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"univalens: numerical checks of univalence criteria for an integral operator"};
    app.set_help_flag("--help", "print this help message and exit");  // -h would clash with --h
    app.require_subcommand(1);

    Common check_c, map_c, chain_c, extend_c, repro_c;
    auto* check = app.add_subcommand("check", "evaluate both conditions of a criterion");
    add_common(check, check_c);

    auto* map = app.add_subcommand("map", "render images of a polar mesh under f and F_beta");
    add_common(map, map_c);
    int rings = 4, rays = 8;
    std::string svg_path;
    map->add_option("--rings", rings, "number of concentric circles");
    map->add_option("--rays", rays, "number of radial segments");
    map->add_option("--svg", svg_path, "output SVG path")->required();

    auto* chain = app.add_subcommand("chain", "sample the Loewner chain and its transfer function");
    add_common(chain, chain_c);
    std::string times;
    chain->add_option("--t", times, "comma-separated times");

    auto* extend = app.add_subcommand("extend", "quasiconformal extension and its Beltrami coefficient");
    add_common(extend, extend_c);
    std::string annulus;
    bool k_estimate = false;
    extend->add_option("--annulus", annulus, "rin:rout (default 1.001:5)");
    extend->add_flag("--k-estimate", k_estimate, "measure sup |mu| over the annulus");

    auto* repro = app.add_subcommand("reproduce", "reproduce a worked example");
    add_common(repro, repro_c, false);
    std::string which;
    repro->add_option("target", which, "example1")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        auto clock_for = [](const Common& c) -> std::optional<Clock::time_point> {
            if (c.timing) return Clock::now();
            return std::nullopt;
        };
        if (*check) return run_check(check_c, clock_for(check_c));
        if (*map) return run_map(map_c, rings, rays, svg_path, clock_for(map_c));
        if (*chain) return run_chain(chain_c, times, clock_for(chain_c));
        if (*extend) return run_extend(extend_c, annulus, k_estimate, clock_for(extend_c));
        if (*repro) return run_reproduce(repro_c, which, clock_for(repro_c));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
