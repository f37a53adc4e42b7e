#pragma once

// Pointwise evaluation of the two univalence conditions for the integral
// operator F_beta, their preset specializations, and a numerical supremum
// search over the unit disk.
//
// First condition:  | f'/(g - alpha) - c | < (m+1)/2, c = (m+1)/2 (or (m-1)/2
//                   with FirstCenter::printed_form).
// Main condition:   | T1 + T2 + T3 - (m-1)/2 | <= (m+1)/2 with
//   P  = |z|^{beta(m+1)}
//   T1 = (f'/(g-alpha) - 1) P
//   T2 = (1 - P) [2 z^beta f' h/(g-alpha) + (1/beta) z g'/(g-alpha)]
//   T3 = z^{beta+1} (1-P)^2 / P [z^{beta-1} f' h^2/(g-alpha) + (1/beta)(g' h/(g-alpha) - h')]
// With a quasiconformality constant k both bounds are multiplied by k.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "univalens/complex.hpp"
#include "univalens/error.hpp"
#include "univalens/expr.hpp"
#include "univalens/jet.hpp"

namespace univalens::criteria {

enum class Variant {
    general,
    becker,
    nehari,
    ozaki_nunokawa,
    goluzin,
    pascu_334,
    corollary_c1,
    corollary_c2,
    corollary_c33,
    corollary_c3star,
    corollary_c333,
    corollary_c34,
    corollary_c3,
};

inline constexpr std::array<std::pair<Variant, std::string_view>, 13> variant_names{{
    {Variant::general, "general"},
    {Variant::becker, "becker"},
    {Variant::nehari, "nehari"},
    {Variant::ozaki_nunokawa, "ozaki_nunokawa"},
    {Variant::goluzin, "goluzin"},
    {Variant::pascu_334, "pascu_334"},
    {Variant::corollary_c1, "corollary_c1"},
    {Variant::corollary_c2, "corollary_c2"},
    {Variant::corollary_c33, "corollary_c33"},
    {Variant::corollary_c3star, "corollary_c3star"},
    {Variant::corollary_c333, "corollary_c333"},
    {Variant::corollary_c34, "corollary_c34"},
    {Variant::corollary_c3, "corollary_c3"},
}};

inline std::string_view name(Variant v) {
    for (const auto& [value, text] : variant_names)
        if (value == v) return text;
    return "?";
}

/// Accepts both "corollary_c34" and "corollary-c34".
inline Variant parse_variant(std::string_view text) {
    std::string norm(text);
    std::replace(norm.begin(), norm.end(), '-', '_');
    for (const auto& [value, name] : variant_names)
        if (norm == name) return value;
    throw InvalidArgument("unknown variant '" + std::string(text) + "'");
}

enum class FirstCenter { proof_form, printed_form };

enum class Condition { first, main };

/// Functions derived from f that the corollaries substitute for g and h.
enum class Preset {
    zero,              // 0
    fprime,            // f'
    fsecond,           // f''
    schwarz_h,         // -f''/(2 f')
    quotient_squared,  // (f/z)^2
    ozaki_h,           // 1/z - f/z^2
};

inline constexpr std::array<std::pair<Preset, std::string_view>, 6> preset_names{{
    {Preset::zero, "zero"},
    {Preset::fprime, "fprime"},
    {Preset::fsecond, "fsecond"},
    {Preset::schwarz_h, "schwarz_h"},
    {Preset::quotient_squared, "quotient_squared"},
    {Preset::ozaki_h, "ozaki_h"},
}};

inline std::string_view name(Preset p) {
    for (const auto& [value, text] : preset_names)
        if (value == p) return text;
    return "?";
}

/// A user expression or a preset derived from f.
struct FnSource {
    std::variant<Preset, expr::FunctionExpr> fn = Preset::zero;

    FnSource() = default;
    FnSource(Preset p) : fn(p) {}
    FnSource(expr::FunctionExpr e) : fn(std::move(e)) {}

    /// Preset names (hyphens allowed) take precedence over expressions.
    static FnSource parse(std::string_view text) {
        std::string norm(text);
        std::replace(norm.begin(), norm.end(), '-', '_');
        for (const auto& [value, name] : preset_names)
            if (norm == name) return FnSource(value);
        return FnSource(expr::parse(text));
    }

    bool is_preset(Preset p) const {
        const auto* q = std::get_if<Preset>(&fn);
        return q && *q == p;
    }

    std::string label() const {
        if (const auto* p = std::get_if<Preset>(&fn)) return std::string(name(*p));
        return std::get<expr::FunctionExpr>(fn).source();
    }
};

struct CriterionSpec {
    double m = 1.0;
    cx alpha{};
    cx beta{1.0, 0.0};
    Variant variant = Variant::general;
    std::optional<FnSource> g;
    std::optional<FnSource> h;
    FirstCenter first_center = FirstCenter::proof_form;
    std::optional<double> k;

    void validate() const {
        if (!(m > 0.0)) throw InvalidArgument("m must be positive");
        if (!(alpha.real() < 0.5)) throw InvalidArgument("Re alpha must be < 1/2");
        if (!(beta.real() > 0.0)) throw InvalidArgument("Re beta must be positive");
        if (k && !(*k >= 0.0 && *k < 1.0)) throw InvalidArgument("k must lie in [0, 1)");
    }
};

/// f', g, g', h, h' (and f'') at one point.
struct Ingredients {
    cx fp;
    cx fpp;
    Jet<1> g;
    Jet<1> h;
};

/// A criterion with every preset substituted and parameters fixed.
class Criterion {
public:
    Criterion(expr::FunctionExpr f, FnSource g, FnSource h, cx alpha, cx beta, double m, Variant variant,
              FirstCenter first_center, std::optional<double> k)
        : f_(std::move(f)), g_(std::move(g)), h_(std::move(h)), alpha_(alpha), beta_(beta), m_(m),
          variant_(variant), first_center_(first_center), k_(k) {
        const auto j = f_.jet<5>(cx{});
        taylor0_ = j.c;
    }

    const expr::FunctionExpr& f() const { return f_; }
    const FnSource& g() const { return g_; }
    const FnSource& h() const { return h_; }
    cx alpha() const { return alpha_; }
    cx beta() const { return beta_; }
    double m() const { return m_; }
    Variant variant() const { return variant_; }
    FirstCenter first_center() const { return first_center_; }
    const std::optional<double>& k() const { return k_; }
    double k_scale() const { return k_.value_or(1.0); }

    Ingredients ingredients(cx z) const {
        const auto fj = f_.jet<3>(z);
        Ingredients in;
        in.fp = fj.derivative(1);
        in.fpp = fj.derivative(2);
        in.g = evaluate(g_, fj, z);
        in.h = evaluate(h_, fj, z);
        return in;
    }

    /// Jet of g or h at z; presets with a removable singularity at 0 switch
    /// to the Taylor polynomial of f at 0 when |z| < 1e-3.
    Jet<1> evaluate(const FnSource& src, const Jet<3>& fj, cx z) const {
        if (const auto* e = std::get_if<expr::FunctionExpr>(&src.fn)) return e->jet<1>(z);
        constexpr double removable_radius = 1e-3;
        const auto zj = Jet<1>::variable(z);
        switch (std::get<Preset>(src.fn)) {
            case Preset::zero: return Jet<1>::constant(0.0);
            case Preset::fprime: return truncate<1>(differentiate(fj));
            case Preset::fsecond: return differentiate(differentiate(fj));
            case Preset::schwarz_h: {
                const auto fp = differentiate(fj);
                if (std::abs(fp.c[0]) < 1e-14) throw PoleError("f' vanishes (critical point)");
                return -0.5 * (differentiate(fp) / truncate<1>(fp));
            }
            case Preset::quotient_squared: {
                Jet<1> q;
                if (std::abs(z) < removable_radius) {
                    const std::array<cx, 5> coeffs{taylor0_[1], taylor0_[2], taylor0_[3], taylor0_[4], taylor0_[5]};
                    q = polyval(coeffs, zj);
                } else {
                    q = truncate<1>(fj) / zj;
                }
                return q * q;
            }
            case Preset::ozaki_h: {
                if (std::abs(z) < removable_radius) {
                    const std::array<cx, 4> coeffs{-taylor0_[2], -taylor0_[3], -taylor0_[4], -taylor0_[5]};
                    return polyval(coeffs, zj);
                }
                return (zj - truncate<1>(fj)) / (zj * zj);
            }
        }
        throw InvalidArgument("unknown preset");
    }

private:
    expr::FunctionExpr f_;
    FnSource g_;
    FnSource h_;
    cx alpha_;
    cx beta_;
    double m_;
    Variant variant_;
    FirstCenter first_center_;
    std::optional<double> k_;
    std::array<cx, 6> taylor0_{};
};

/// Substitutes the presets of each variant and fixes the parameters the
/// variant prescribes; parameters the variant leaves free come from spec.
inline Criterion resolve_preset(const CriterionSpec& spec, const expr::FunctionExpr& f) {
    spec.validate();
    cx alpha = spec.alpha;
    cx beta = spec.beta;
    double m = spec.m;
    FnSource g = spec.g.value_or(FnSource(Preset::zero));
    FnSource h = spec.h.value_or(FnSource(Preset::zero));
    auto fix = [&](cx a, std::optional<cx> b, std::optional<double> mm) {
        alpha = a;
        if (b) beta = *b;
        if (mm) m = *mm;
    };
    switch (spec.variant) {
        case Variant::general:
            if (!spec.g) throw InvalidArgument("the general variant needs an explicit g");
            break;
        case Variant::becker:
            g = Preset::fprime; h = Preset::zero;
            fix(0.0, cx{1.0}, 1.0);
            break;
        case Variant::nehari:
            g = Preset::fprime; h = Preset::schwarz_h;
            fix(0.0, cx{1.0}, 1.0);
            break;
        case Variant::ozaki_nunokawa:
            g = Preset::quotient_squared; h = Preset::ozaki_h;
            fix(0.0, cx{1.0}, 1.0);
            break;
        case Variant::goluzin:
            if (!spec.h)
                throw InvalidArgument(
                    "goluzin: the substitution for h is ambiguous in the source; supply h explicitly");
            g = Preset::fprime;
            fix(0.0, cx{1.0}, 1.0);
            break;
        case Variant::pascu_334:
            if (m < 1.0) throw InvalidArgument("pascu_334 requires m >= 1");
            g = Preset::fprime; h = Preset::zero;
            fix(0.0, std::nullopt, std::nullopt);
            break;
        case Variant::corollary_c1:
            g = Preset::fprime;
            break;
        case Variant::corollary_c2:
            g = Preset::fprime; h = Preset::fsecond;
            break;
        case Variant::corollary_c33:
            g = Preset::fprime; h = Preset::zero;
            break;
        case Variant::corollary_c3star:
            g = Preset::fprime; h = Preset::schwarz_h;
            fix(0.0, cx{1.0}, std::nullopt);
            break;
        case Variant::corollary_c333:
            g = Preset::fprime; h = Preset::zero;
            fix(0.0, std::nullopt, std::nullopt);
            break;
        case Variant::corollary_c34:
            g = Preset::quotient_squared; h = Preset::zero;
            fix(0.0, std::nullopt, std::nullopt);
            break;
        case Variant::corollary_c3:
            g = Preset::fprime; h = Preset::fsecond;
            fix(0.0, cx{1.0}, std::nullopt);
            break;
    }
    return Criterion(f, std::move(g), std::move(h), alpha, beta, m, spec.variant, spec.first_center, spec.k);
}

struct PointEval {
    cx z{};
    cx value{};
    double modulus = 0.0;
    double bound = 0.0;
    bool strict = false;
    bool satisfied = false;
};

namespace detail {

inline PointEval finish(cx z, cx value, double bound, bool strict) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw OverflowError("non-finite condition value");
    PointEval p;
    p.z = z;
    p.value = value;
    p.modulus = std::abs(value);
    p.bound = bound;
    p.strict = strict;
    p.satisfied = strict ? p.modulus < bound : p.modulus <= bound;
    return p;
}

inline cx denominator(const Criterion& c, const Ingredients& in) {
    const cx d = in.g.c[0] - c.alpha();
    if (std::abs(d) < 1e-14) throw PoleError("g(z) - alpha vanishes");
    return d;
}

}  // namespace detail

/// First condition; strict unless a quasiconformality constant k is set
/// (the target set U(k) is closed).
inline PointEval eval_first_condition(const Criterion& c, cx z) {
    const Ingredients in = c.ingredients(z);
    const cx ratio = in.fp / detail::denominator(c, in);
    const double m = c.m();
    const double center = c.first_center() == FirstCenter::proof_form ? 0.5 * (m + 1.0) : 0.5 * (m - 1.0);
    return detail::finish(z, ratio - center, c.k_scale() * 0.5 * (m + 1.0), !c.k().has_value());
}

/// The pascu_334 condition: (1 - |z|^{(m+1) Re beta}) / Re beta * |z f''/f'| <= 1.
inline PointEval eval_pascu_condition(const Criterion& c, cx z) {
    if (z == cx{}) throw DomainError("the main condition is evaluated for z != 0");
    const Ingredients in = c.ingredients(z);
    if (std::abs(in.fp) < 1e-14) throw PoleError("f' vanishes (critical point)");
    const double rb = c.beta().real();
    const double one_minus = -std::expm1((c.m() + 1.0) * rb * std::log(std::abs(z)));
    return detail::finish(z, one_minus / rb * (z * in.fpp / in.fp), c.k_scale(), false);
}

inline PointEval eval_main_condition(const Criterion& c, cx z) {
    if (c.variant() == Variant::pascu_334) return eval_pascu_condition(c, z);
    if (z == cx{}) throw DomainError("the main condition is evaluated for z != 0");
    const Ingredients in = c.ingredients(z);
    const cx d = detail::denominator(c, in);
    const cx beta = c.beta();
    const double m = c.m();
    const double log_r = std::log(std::abs(z));
    const cx log_z = principal_log(z);
    const cx weight_exp = beta * (m + 1.0);

    const cx p = std::exp(weight_exp * log_r);      // |z|^{beta(m+1)}
    const cx one_minus_p = -cexpm1(weight_exp * log_r);
    const cx ratio = in.fp / d;
    const cx gp = in.g.c[1];
    const cx hv = in.h.c[0];
    const cx hp = in.h.c[1];

    const cx t1 = (ratio - 1.0) * p;
    const cx z_beta = std::exp(beta * log_z);
    const cx t2 = one_minus_p * (2.0 * z_beta * in.fp * hv / d + z * gp / (beta * d));

    cx t3{};
    const cx bracket = std::exp((beta - 1.0) * log_z) * in.fp * hv * hv / d + (gp * hv / d - hp) / beta;
    if (bracket != cx{}) {
        const cx log_pre = (beta + 1.0) * log_z - weight_exp * log_r;
        const double log_mag = log_pre.real() + 2.0 * std::log(std::abs(one_minus_p)) + std::log(std::abs(bracket));
        if (log_pre.real() > 700.0 || log_mag > 700.0)
            throw OverflowError("main condition: third term overflows (log-magnitude " + std::to_string(log_mag) +
                                ")");
        t3 = std::exp(log_pre) * one_minus_p * one_minus_p * bracket;
    }
    return detail::finish(z, t1 + t2 + t3 - 0.5 * (m - 1.0), c.k_scale() * 0.5 * (m + 1.0), false);
}

inline PointEval eval_condition(const Criterion& c, Condition which, cx z) {
    return which == Condition::first ? eval_first_condition(c, z) : eval_main_condition(c, z);
}

/// {f; z} = f'''/f' - (3/2)(f''/f')^2.
inline cx schwarzian(const expr::FunctionExpr& f, cx z) {
    const auto j = f.jet<3>(z);
    const cx d1 = j.derivative(1);
    if (std::abs(d1) < 1e-14) throw PoleError("schwarzian: f' vanishes (critical point)");
    const cx ratio = j.derivative(2) / d1;
    return j.derivative(3) / d1 - 1.5 * ratio * ratio;
}

/// |1 - x^{(m+1) beta}| / |beta|, the left side of the bound behind pascu_334.
inline double pascu_lhs(double x, cx beta, double m) {
    return std::abs(cexpm1((m + 1.0) * beta * std::log(x))) / std::abs(beta);
}

/// (1 - x^{(m+1) Re beta}) / Re beta.
inline double pascu_rhs(double x, cx beta, double m) {
    return -std::expm1((m + 1.0) * beta.real() * std::log(x)) / beta.real();
}

// ---------------------------------------------------------------- sup search

struct GridSpec {
    int n_radii = 64;
    int n_angles = 256;
    double r_min = 1e-4;
    double r_max = 0.9995;

    void validate() const {
        if (!(r_min > 0.0 && r_min < r_max && r_max < 1.0))
            throw InvalidArgument("grid: need 0 < r_min < r_max < 1");
        if (n_radii < 4 || n_angles < 4) throw InvalidArgument("grid: n_radii and n_angles must be >= 4");
    }

    /// Radii equally spaced in logit(r) = log(r/(1-r)), which clusters them
    /// logarithmically toward both 0 and 1.
    std::vector<double> radii() const {
        const double lo = std::log(r_min / (1.0 - r_min));
        const double hi = std::log(r_max / (1.0 - r_max));
        std::vector<double> r(n_radii);
        for (int i = 0; i < n_radii; ++i) {
            const double s = lo + (hi - lo) * i / (n_radii - 1);
            r[i] = 1.0 / (1.0 + std::exp(-s));
        }
        r.front() = r_min;
        r.back() = r_max;
        return r;
    }

    /// theta_j = -pi + 2 pi j / n_angles.
    std::vector<double> angles() const {
        std::vector<double> t(n_angles);
        for (int j = 0; j < n_angles; ++j) t[j] = -pi + 2.0 * pi * j / n_angles;
        return t;
    }
};

struct SupReport {
    double sup_estimate = 0.0;
    cx argmax{};
    std::int64_t samples = 0;
    int refinement_rounds = 0;
    bool satisfied = false;
    double margin = 0.0;
    double bound = 0.0;
    bool strict = false;
};

namespace detail {

struct Probe {
    double r = 0.0;
    double theta = 0.0;
    double modulus = -1.0;
};

inline bool better(const Probe& a, const Probe& b) {
    if (a.modulus != b.modulus) return a.modulus > b.modulus;
    if (a.r != b.r) return a.r < b.r;
    return a.theta < b.theta;
}

inline double wrap_angle(double t) {
    if (t < -pi) t += 2.0 * pi;
    if (t >= pi) t -= 2.0 * pi;
    return t;
}

[[noreturn]] inline void rethrow_at(cx z) {
    const std::string where = " at z = " + to_string(z);
    try {
        throw;
    } catch (const PoleError& e) {
        throw PoleError(e.what() + where);
    } catch (const OverflowError& e) {
        throw OverflowError(e.what() + where);
    } catch (const DomainError& e) {
        throw DomainError(e.what() + where);
    } catch (const Error& e) {
        throw EvaluationError(e.what() + where);
    }
}

}  // namespace detail

/// Numerical supremum of a condition modulus over the disk: polar grid, then
/// bisection refinement in r and theta around the five best samples. At least
/// three rounds run; refinement stops once the steps are below 1e-9 and a
/// round improves the maximum by less than 1e-12 (relative), or after 64
/// rounds. Radial steps may approach 0 and 1 but never reach them.
inline SupReport sup_search(const Criterion& c, const GridSpec& grid, Condition which) {
    grid.validate();
    constexpr int top_candidates = 5;
    constexpr int min_rounds = 3;
    constexpr int max_rounds = 64;

    SupReport rep;
    double bound = 0.0;
    bool strict = false;
    auto probe = [&](double r, double theta) {
        const cx z = std::polar(r, theta);
        PointEval pe;
        try {
            pe = eval_condition(c, which, z);
        } catch (const Error&) {
            detail::rethrow_at(z);
        }
        ++rep.samples;
        bound = pe.bound;
        strict = pe.strict;
        return detail::Probe{r, theta, pe.modulus};
    };

    const auto radii = grid.radii();
    const auto angles = grid.angles();
    std::vector<detail::Probe> samples;
    std::vector<std::pair<int, int>> index;
    samples.reserve(radii.size() * angles.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        for (std::size_t j = 0; j < angles.size(); ++j) {
            samples.push_back(probe(radii[i], angles[j]));
            index.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }

    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t ncand = std::min<std::size_t>(top_candidates, order.size());
    std::partial_sort(order.begin(), order.begin() + ncand, order.end(),
                      [&](std::size_t a, std::size_t b) { return detail::better(samples[a], samples[b]); });

    struct Candidate {
        detail::Probe at;
        double dr_lo, dr_hi, dtheta;
    };
    std::vector<Candidate> cands;
    const double dtheta0 = 2.0 * pi / grid.n_angles;
    for (std::size_t n = 0; n < ncand; ++n) {
        const auto [i, j] = index[order[n]];
        const double r = radii[i];
        const double lo = i > 0 ? r - radii[i - 1] : r;
        const double hi = i + 1 < static_cast<int>(radii.size()) ? radii[i + 1] - r : 1.0 - r;
        cands.push_back({samples[order[n]], lo, hi, dtheta0});
    }
    detail::Probe best = samples[order[0]];

    for (int round = 1; round <= max_rounds; ++round) {
        const double before = best.modulus;
        for (auto& cand : cands) {
            const std::array<double, 3> rs{cand.at.r - 0.5 * cand.dr_lo, cand.at.r, cand.at.r + 0.5 * cand.dr_hi};
            const std::array<double, 3> ts{cand.at.theta - 0.5 * cand.dtheta, cand.at.theta,
                                           cand.at.theta + 0.5 * cand.dtheta};
            detail::Probe local = cand.at;
            for (int a = 0; a < 3; ++a) {
                const double r = rs[a];
                if (!(r > 0.0 && r < 1.0)) continue;
                if (a != 1 && r == cand.at.r) continue;
                for (int b = 0; b < 3; ++b) {
                    if (a == 1 && b == 1) continue;
                    const detail::Probe p = probe(r, detail::wrap_angle(ts[b]));
                    if (detail::better(p, local)) local = p;
                }
            }
            cand.at = local;
            cand.dr_lo *= 0.5;
            cand.dr_hi *= 0.5;
            cand.dtheta *= 0.5;
            if (detail::better(local, best)) best = local;
        }
        rep.refinement_rounds = round;
        double widest = 0.0;
        for (const auto& cand : cands) widest = std::max({widest, cand.dr_lo, cand.dr_hi, cand.dtheta});
        if (round >= min_rounds && widest <= 1e-9 && best.modulus - before <= 1e-12 * std::max(1.0, best.modulus))
            break;
    }

    rep.sup_estimate = best.modulus;
    rep.argmax = std::polar(best.r, best.theta);
    rep.bound = bound;
    rep.strict = strict;
    rep.satisfied = strict ? best.modulus < bound : best.modulus <= bound;
    rep.margin = bound - best.modulus;
    return rep;
}

struct CriterionReport {
    SupReport first;
    SupReport main;
    bool overall = false;
};

/// Hypotheses on the inputs themselves: f in class A and g(0) = 1.
inline void check_inputs(const Criterion& c) {
    if (!expr::class_a_check(c.f()).is_class_a)
        throw InvalidArgument("f must satisfy f(0) = 0 and f'(0) = 1");
    const cx g0 = c.ingredients(cx{}).g.c[0];
    if (std::abs(g0 - 1.0) > 1e-10) throw InvalidArgument("g must satisfy g(0) = 1, got " + to_string(g0));
}

inline CriterionReport check_criterion(const Criterion& c, const GridSpec& grid = {}) {
    check_inputs(c);
    CriterionReport rep;
    rep.first = sup_search(c, grid, Condition::first);
    rep.main = sup_search(c, grid, Condition::main);
    rep.overall = rep.first.satisfied && rep.main.satisfied;
    return rep;
}

inline CriterionReport check_criterion(const CriterionSpec& spec, const expr::FunctionExpr& f,
                                       const GridSpec& grid = {}) {
    return check_criterion(resolve_preset(spec, f), grid);
}

}  // namespace univalens::criteria
