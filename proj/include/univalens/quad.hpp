#pragma once

// Adaptive Gauss-Kronrod quadrature of complex integrands and the integral
// operator F_beta(z) = [beta * int_0^z u^(beta-1) f'(u) du]^(1/beta).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "univalens/complex.hpp"
#include "univalens/error.hpp"
#include "univalens/expr.hpp"

namespace univalens::quad {

struct QuadConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_subdivisions = 200;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1)
            throw InvalidArgument("QuadConfig: tolerances must be positive and max_subdivisions >= 1");
    }
};

struct QuadResult {
    cx value{};
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    cx value;
    double error;
};

template <typename F>
Segment gk15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cx fc = f(center);
    cx kronrod = fc * wgk[7];
    cx gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const cx sum = f(center - dx) + f(center + dx);
        kronrod += wgk[j] * sum;
        if (j % 2 == 1) gauss += wg[j / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive GK15 on [a, b]: the segment with the largest error
/// estimate is bisected until the summed estimate meets the tolerance.
template <typename F>
QuadResult integrate(F&& f, double a, double b, const QuadConfig& cfg = {}) {
    cfg.validate();
    std::vector<detail::Segment> segs{detail::gk15(f, a, b)};
    auto worse = [](const detail::Segment& x, const detail::Segment& y) { return x.error < y.error; };
    for (;;) {
        cx total{};
        double err = 0.0;
        for (const auto& s : segs) {
            total += s.value;
            err += s.error;
        }
        if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)))
            return {total, err, static_cast<int>(segs.size())};
        if (static_cast<int>(segs.size()) >= cfg.max_subdivisions)
            throw NonConvergence("quadrature did not converge within " + std::to_string(cfg.max_subdivisions) +
                                 " subdivisions (error estimate " + std::to_string(err) + ")");
        std::pop_heap(segs.begin(), segs.end(), worse);
        const detail::Segment s = segs.back();
        segs.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        segs.push_back(detail::gk15(f, s.a, mid));
        std::push_heap(segs.begin(), segs.end(), worse);
        segs.push_back(detail::gk15(f, mid, s.b));
        std::push_heap(segs.begin(), segs.end(), worse);
    }
}

/// Exponent q of the substitution s = tau^q that makes s^(beta-1) bounded;
/// 1 when Re beta >= 1.
inline int regularization_exponent(cx beta) {
    if (beta.real() >= 1.0) return 1;
    return static_cast<int>(std::ceil(1.0 / beta.real())) + 1;
}

/// J(w) = beta * int_0^1 s^(beta-1) f'(w s) ds, so that
/// beta * int_0^w u^(beta-1) f'(u) du = w^beta J(w) and J(0) = f'(0).
inline QuadResult operator_bracket(const expr::FunctionExpr& f, cx beta, cx w, const QuadConfig& cfg = {}) {
    if (!(beta.real() > 0.0)) throw InvalidArgument("integral operator requires Re beta > 0");
    if (w == cx{}) return {f.jet<1>(cx{}).c[1], 0.0, 0};
    const int q = regularization_exponent(beta);
    const cx inner_exp = static_cast<double>(q) * beta - 1.0;
    auto integrand = [&](double tau) -> cx {
        if (tau <= 0.0) return {};
        const double s = q == 1 ? tau : std::pow(tau, q);
        const cx weight = q == 1 && beta == cx{1.0, 0.0} ? cx{1.0, 0.0} : real_pow_complex(tau, inner_exp);
        return static_cast<double>(q) * weight * f.jet<1>(w * s).c[1];
    };
    QuadResult r = integrate(integrand, 0.0, 1.0, cfg);
    r.value *= beta;
    r.error *= std::abs(beta);
    return r;
}

/// w * [J(w)]^(1/beta) with the power continued along the segment [0, w]
/// from the value 1 at the origin; equals F_beta(w) for f in class A.
inline cx operator_value(const expr::FunctionExpr& f, cx beta, cx w, const QuadConfig& cfg = {}) {
    if (w == cx{}) return {};
    const cx j0 = f.jet<1>(cx{}).c[1];
    auto path = [&](double s) { return operator_bracket(f, beta, s * w, cfg).value; };
    const cx log_j = continued_log(path, j0, principal_log(j0));
    return w * std::exp(log_j / beta);
}

/// F_beta(z) for |z| < 1 and f in class A.
inline cx integral_operator(const expr::FunctionExpr& f, cx beta, cx z, const QuadConfig& cfg = {}) {
    if (!(beta.real() > 0.0)) throw InvalidArgument("integral operator requires Re beta > 0");
    if (!(std::abs(z) < 1.0)) throw DomainError("integral operator is evaluated only for |z| < 1");
    if (!expr::class_a_check(f).is_class_a)
        throw InvalidArgument("integral operator requires f(0) = 0 and f'(0) = 1");
    return operator_value(f, beta, z, cfg);
}

}  // namespace univalens::quad
