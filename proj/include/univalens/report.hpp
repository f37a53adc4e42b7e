#pragma once

// Run reports (JSON), flag-value parsers shared by the command-line tool,
// and the bundle behind `reproduce example1`.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "univalens/complex.hpp"
#include "univalens/criteria.hpp"
#include "univalens/error.hpp"
#include "univalens/expr.hpp"
#include "univalens/loewner.hpp"
#include "univalens/qcext.hpp"
#include "univalens/quad.hpp"
#include "univalens/svg.hpp"

namespace univalens::report {

using json = nlohmann::ordered_json;

inline constexpr std::string_view tool_version = "0.1.0";

// ---------------------------------------------------------------- parsing

namespace detail {

inline double to_double(std::string_view text, std::string_view what) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw InvalidArgument(std::string(what) + ": cannot parse '" + s + "' as a real number");
    return v;
}

inline std::string strip(std::string_view text) {
    std::string out;
    for (char ch : text)
        if (ch != ' ' && ch != '\t') out += ch;
    return out;
}

}  // namespace detail

/// "a", "bi", "a+bi", "a-bi", "i", "-i"; exponents like 1e-3 are allowed.
inline cx parse_complex(std::string_view text, std::string_view what = "complex value") {
    const std::string s = detail::strip(text);
    if (s.empty()) throw InvalidArgument(std::string(what) + ": empty value");
    if (s.back() != 'i') return {detail::to_double(s, what), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re_text = split == std::string::npos ? "" : body.substr(0, split);
    const std::string im_text = split == std::string::npos ? body : body.substr(split);
    double im;
    if (im_text.empty() || im_text == "+") im = 1.0;
    else if (im_text == "-") im = -1.0;
    else im = detail::to_double(im_text, what);
    const double re = re_text.empty() ? 0.0 : detail::to_double(re_text, what);
    return {re, im};
}

/// "nr=N,ntheta=N,rmin=R,rmax=R"; omitted keys keep their defaults.
inline criteria::GridSpec parse_grid(std::string_view text) {
    criteria::GridSpec g;
    const std::string s = detail::strip(text);
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string item = s.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--grid: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        auto as_int = [&](std::string_view k) {
            const double v = detail::to_double(val, "--grid " + std::string(k));
            if (v != std::floor(v)) throw InvalidArgument("--grid " + std::string(k) + ": expected an integer");
            return static_cast<int>(v);
        };
        if (key == "nr") g.n_radii = as_int(key);
        else if (key == "ntheta") g.n_angles = as_int(key);
        else if (key == "rmin") g.r_min = detail::to_double(val, "--grid rmin");
        else if (key == "rmax") g.r_max = detail::to_double(val, "--grid rmax");
        else throw InvalidArgument("--grid: unknown key '" + key + "' (nr, ntheta, rmin, rmax)");
        pos = comma + 1;
    }
    g.validate();
    return g;
}

/// Comma-separated reals.
inline std::vector<double> parse_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    const std::string s = detail::strip(text);
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(detail::to_double(s.substr(pos, comma - pos), what));
        pos = comma + 1;
    }
    return out;
}

/// "rin:rout".
inline std::pair<double, double> parse_annulus(std::string_view text) {
    const std::string s = detail::strip(text);
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) throw InvalidArgument("--annulus: expected rin:rout");
    const double a = detail::to_double(s.substr(0, colon), "--annulus rin");
    const double b = detail::to_double(s.substr(colon + 1), "--annulus rout");
    if (!(1.0 < a && a < b)) throw InvalidArgument("--annulus: need 1 < rin < rout");
    return {a, b};
}

// ---------------------------------------------------------------- json

inline json to_json(cx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json to_json(const criteria::GridSpec& g) {
    return json{{"n_radii", g.n_radii}, {"n_angles", g.n_angles}, {"r_min", g.r_min}, {"r_max", g.r_max}};
}

inline json to_json(const criteria::SupReport& s) {
    return json{{"sup", s.sup_estimate},
                {"bound", s.bound},
                {"strict", s.strict},
                {"satisfied", s.satisfied},
                {"margin", s.margin},
                {"argmax", to_json(s.argmax)},
                {"samples", s.samples},
                {"refinement_rounds", s.refinement_rounds}};
}

/// Parameters as actually used, after the variant's substitutions.
inline json spec_json(const criteria::Criterion& c, const criteria::GridSpec& grid) {
    json j;
    j["f"] = c.f().source();
    j["g"] = c.g().label();
    j["h"] = c.h().label();
    j["alpha"] = to_json(c.alpha());
    j["beta"] = to_json(c.beta());
    j["m"] = c.m();
    j["k"] = c.k() ? json(*c.k()) : json(nullptr);
    j["variant"] = std::string(criteria::name(c.variant()));
    j["first_center"] = c.first_center() == criteria::FirstCenter::proof_form ? "proof" : "printed";
    j["grid"] = to_json(grid);
    return j;
}

inline json to_json(const loewner::ChainReport& r, const std::vector<double>& ts, const loewner::Chain& chain) {
    json a1 = json::array();
    for (double t : ts) a1.push_back(json{{"t", t}, {"value", to_json(chain.a1(t))}});
    return json{{"times", ts},
                {"samples", r.samples},
                {"sup_abs_w", r.sup_abs_w},
                {"min_re_p", std::isfinite(r.min_re_p) ? json(r.min_re_p) : json(nullptr)},
                {"k", r.k ? json(*r.k) : json(nullptr)},
                {"passed", r.passed},
                {"worst",
                 json{{"z", to_json(r.worst.z)},
                      {"t", r.worst.t},
                      {"L", to_json(r.worst.L)},
                      {"G", to_json(r.worst.G)},
                      {"w", to_json(r.worst.w)},
                      {"p", to_json(r.worst.p)}}},
                {"a1", a1}};
}

inline json to_json(const qcext::EvidenceReport& e) {
    json circles = json::array();
    for (const auto& c : e.circles)
        circles.push_back(json{{"radius", c.radius},
                               {"critical_points", c.critical_points},
                               {"min_winding", c.min_winding},
                               {"max_winding", c.max_winding}});
    return json{{"kind", "numerical evidence, not a proof"},
                {"min_abs_derivative", e.min_abs_derivative},
                {"argmin_derivative", to_json(e.argmin_derivative)},
                {"circles", circles},
                {"evaluations", e.evaluations},
                {"passed", e.passed}};
}

/// Skeleton shared by every command; sections are appended by the caller
/// and finish() adds the trailing fields.
inline json make_report(std::string_view command, json spec) {
    json j;
    j["tool_version"] = std::string(tool_version);
    j["command"] = std::string(command);
    j["spec"] = std::move(spec);
    return j;
}

inline void finish(json& j, bool overall, std::optional<std::chrono::steady_clock::time_point> started) {
    j["overall"] = overall;
    std::int64_t ms = 0;
    if (started)
        ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - *started)
                 .count();
    j["wall_time_ms"] = ms;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- reproduce example1

struct Example1 {
    json report;
    std::string figure1;  // f and its mesh image
    std::string figure2;  // F_2
    std::vector<std::string> failures;
};

inline constexpr std::string_view example1_f = "z/(1 - z^2/2)";

/// f = z/(1 - z^2/2) under corollary_c34 with beta = 2, m = 1: checks the
/// first-condition supremum 1/2, the main-condition bound 24/27, sampling
/// evidence for the univalence of F_2, and renders both figures.
inline Example1 reproduce_example1(const criteria::GridSpec& grid = {},
                                   std::optional<std::chrono::steady_clock::time_point> started = std::nullopt) {
    const expr::FunctionExpr f = expr::parse(example1_f);
    criteria::CriterionSpec spec;
    spec.variant = criteria::Variant::corollary_c34;
    spec.beta = 2.0;
    spec.m = 1.0;
    const criteria::Criterion c = criteria::resolve_preset(spec, f);
    const criteria::CriterionReport cr = criteria::check_criterion(c, grid);

    Example1 out;
    auto expect = [&](bool ok, std::string what) {
        if (!ok) out.failures.push_back(std::move(what));
        return ok;
    };
    json assertions = json::array();
    auto record = [&](std::string name, double value, double target, bool ok) {
        assertions.push_back(json{{"name", name}, {"value", value}, {"target", target}, {"passed", ok}});
        expect(ok, name + ": value " + std::to_string(value) + ", target " + std::to_string(target));
    };
    record("condition1.sup = 1/2 within 1e-6", cr.first.sup_estimate, 0.5,
           std::abs(cr.first.sup_estimate - 0.5) <= 1e-6 && cr.first.satisfied);
    record("condition2.sup <= 24/27 + 1e-6", cr.main.sup_estimate, 24.0 / 27.0,
           cr.main.sup_estimate <= 24.0 / 27.0 + 1e-6 && cr.main.satisfied);

    auto F2 = [&](cx z) { return quad::integral_operator(f, 2.0, z); };
    const criteria::GridSpec evidence_grid{16, 64, 1e-3, 0.999};
    const qcext::EvidenceReport ev = qcext::univalence_evidence(F2, evidence_grid, 16);
    assertions.push_back(json{{"name", "univalence evidence for F_2"}, {"passed", ev.passed}});
    expect(ev.passed, "univalence evidence for F_2 failed");

    const svg::MeshSpec mesh{};
    svg::SvgScene fig1;
    fig1.panels.push_back(svg::render_map([&](cx z) { return f(z); }, mesh, "f(z) = z/(1 - z^2/2)"));
    svg::SvgScene fig2;
    fig2.panels.push_back(svg::render_map(F2, mesh, "F_2(z)"));
    out.figure1 = svg::to_svg(fig1);
    out.figure2 = svg::to_svg(fig2);

    json rep = make_report("reproduce example1", spec_json(c, grid));
    rep["condition1"] = to_json(cr.first);
    rep["condition2"] = to_json(cr.main);
    rep["evidence"] = to_json(ev);
    rep["assertions"] = assertions;
    finish(rep, out.failures.empty(), started);
    out.report = std::move(rep);
    return out;
}

}  // namespace univalens::report
