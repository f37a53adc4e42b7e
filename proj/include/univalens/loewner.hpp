#pragma once

// The Loewner chain attached to the integral operator,
//
//   L(z,t) = z [phi4(z,t)]^{1/beta},
//   phi3   = 1 + (e^{beta m t} - e^{-beta t}) z^beta h(e^{-t} z),
//   phi4   = e^{-beta t} J(e^{-t} z) + (e^{beta m t} - e^{-beta t}) (g(e^{-t} z) - alpha) / phi3,
//
// where J is the operator bracket of quad.hpp, together with its transfer
// functions G, w = 2G/(m+1) - (m-1)/(m+1) and p = (1+w)/(1-w).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "univalens/complex.hpp"
#include "univalens/criteria.hpp"
#include "univalens/error.hpp"
#include "univalens/expr.hpp"
#include "univalens/quad.hpp"

namespace univalens::loewner {

struct ChainParams {
    expr::FunctionExpr f;
    criteria::FnSource g;
    criteria::FnSource h;
    cx alpha{};
    cx beta{1.0, 0.0};
    double m = 1.0;
    quad::QuadConfig quad{};

    void validate() const {
        if (!(m > 0.0)) throw InvalidArgument("m must be positive");
        if (!(alpha.real() < 0.5)) throw InvalidArgument("Re alpha must be < 1/2");
        if (!(beta.real() > 0.0)) throw InvalidArgument("Re beta must be positive");
        if (!expr::class_a_check(f).is_class_a) throw InvalidArgument("f must satisfy f(0) = 0, f'(0) = 1");
    }

    /// The chain of a resolved criterion (same f, g, h, alpha, beta, m).
    static ChainParams from(const criteria::Criterion& c) {
        ChainParams p;
        p.f = c.f();
        p.g = c.g();
        p.h = c.h();
        p.alpha = c.alpha();
        p.beta = c.beta();
        p.m = c.m();
        return p;
    }
};

/// Evaluator bound to one parameter set. Holds only immutable data.
class Chain {
public:
    explicit Chain(ChainParams params)
        : params_(std::move(params)),
          criterion_(params_.f, params_.g, params_.h, params_.alpha, params_.beta, params_.m,
                     criteria::Variant::general, criteria::FirstCenter::proof_form, std::nullopt) {
        params_.validate();
        g0_ = criterion_.ingredients(cx{}).g.c[0];
    }

    const ChainParams& params() const { return params_; }
    const criteria::Criterion& criterion() const { return criterion_; }

    /// log phi4(0,t), continuous in t: beta m t + Log((g0 - alpha) + s (1 - g0 + alpha))
    /// with s = e^{-beta(m+1)t}. For Re alpha < 1/2 and g0 = 1 the second
    /// factor stays in a disk that avoids the closed negative real axis.
    cx log_phi4_origin(double t) const {
        const cx beta = params_.beta;
        const double m = params_.m;
        const cx s = std::exp(-beta * (m + 1.0) * t);
        const cx q = (g0_ - params_.alpha) + s * (1.0 - g0_ + params_.alpha);
        if (q == cx{}) throw PoleError("phi4 vanishes at the origin");
        return beta * m * t + principal_log(q);
    }

    cx a1(double t) const {
        if (!(t >= 0.0)) throw InvalidArgument("a1: t must be non-negative");
        return std::exp(log_phi4_origin(t) / params_.beta);
    }

    /// phi4(z,t) of the decomposition; throws when phi3 vanishes.
    cx phi4(cx z, double t) const {
        const cx beta = params_.beta;
        const double m = params_.m;
        const cx u = std::exp(-t) * z;
        const cx spread = std::exp(beta * m * t) - std::exp(-beta * t);
        const cx z_beta = z == cx{} ? cx{} : principal_pow(z, beta);
        const auto fj = params_.f.jet<3>(u);
        const Jet<1> hj = criterion_.evaluate(params_.h, fj, u);
        const Jet<1> gj = criterion_.evaluate(params_.g, fj, u);
        const cx phi3 = 1.0 + spread * z_beta * hj.c[0];
        if (std::abs(phi3) <= 1e-12) throw PoleError("phi3 vanishes at z = " + to_string(z));
        const cx phi2 = std::exp(-beta * t) * quad::operator_bracket(params_.f, beta, u, params_.quad).value;
        return phi2 + spread * (gj.c[0] - params_.alpha) / phi3;
    }

    /// L(z,t) with the 1/beta power continued along [0, z] from a1(t).
    cx value(cx z, double t) const {
        if (!(t >= 0.0)) throw InvalidArgument("chain: t must be non-negative");
        if (std::abs(z) > 1.0 + 1e-12) throw DomainError("chain: |z| must not exceed 1");
        if (z == cx{}) return {};
        const cx log0 = log_phi4_origin(t);
        const cx p0 = std::exp(log0);
        auto ratio = [&](double s) {
            const cx v = phi4(s * z, t) / p0;
            if (std::abs(v) < 1e-300) throw PoleError("phi4 vanishes at z = " + to_string(s * z));
            return v;
        };
        const cx log_ratio = continued_log(ratio, cx{1.0, 0.0}, cx{});
        return z * std::exp((log0 + log_ratio) / params_.beta);
    }

    /// G(z,t), three terms evaluated at u = e^{-t} z with e^{-beta t} z^beta
    /// taken as the product of the two principal factors.
    cx transfer_G(cx z, double t) const {
        if (!(t >= 0.0)) throw InvalidArgument("transfer_G: t must be non-negative");
        const cx beta = params_.beta;
        const double m = params_.m;
        const cx u = std::exp(-t) * z;
        const criteria::Ingredients in = criterion_.ingredients(u);
        const cx d = in.g.c[0] - params_.alpha;
        if (std::abs(d) < 1e-14) throw PoleError("g(e^{-t} z) - alpha vanishes at z = " + to_string(z));
        const cx decay = std::exp(-beta * (m + 1.0) * t);
        const cx one_minus = -cexpm1(-beta * (m + 1.0) * t);
        const cx scaled = z == cx{} ? cx{} : std::exp(-beta * t) * principal_pow(z, beta);
        const cx ratio = in.fp / d;
        const cx gp = in.g.c[1];
        const cx hv = in.h.c[0];
        const cx hp = in.h.c[1];

        const cx term1 = decay * (ratio - 1.0);
        const cx term2 = one_minus * (2.0 * scaled * in.fp * hv / d + u / beta * gp / d);
        cx term3{};
        const cx bracket = scaled * in.fp * hv * hv / d + u / beta * (hv * gp / d - hp);
        if (bracket != cx{}) term3 = scaled * one_minus * one_minus / decay * bracket;
        return term1 + term2 + term3;
    }

    struct WP {
        cx w;
        cx p;
    };

    WP transfer_w_p(cx z, double t) const {
        const double m = params_.m;
        const cx w = 2.0 / (m + 1.0) * transfer_G(z, t) - (m - 1.0) / (m + 1.0);
        if (std::abs(1.0 - w) <= 1e-14) throw PoleError("w = 1: p is singular at z = " + to_string(z));
        return {w, (1.0 + w) / (1.0 - w)};
    }

private:
    ChainParams params_;
    criteria::Criterion criterion_;
    cx g0_{};
};

inline cx a1(const ChainParams& params, double t) { return Chain(params).a1(t); }
inline cx chain_value(const ChainParams& params, cx z, double t) { return Chain(params).value(z, t); }
inline cx transfer_G(const ChainParams& params, cx z, double t) { return Chain(params).transfer_G(z, t); }
inline Chain::WP transfer_w_p(const ChainParams& params, cx z, double t) {
    return Chain(params).transfer_w_p(z, t);
}

/// Membership of p in U(k) = { w : |(w-1)/(w+1)| <= k }.
inline bool in_becker_disk(cx p, double k) { return std::abs((p - 1.0) / (p + 1.0)) <= k; }

/// The same set written as a Euclidean disk with center (1+k^2)/(1-k^2)
/// and radius 2k/(1-k^2).
inline bool in_becker_disk_euclidean(cx p, double k) {
    const double den = 1.0 - k * k;
    return std::abs(p - (1.0 + k * k) / den) <= 2.0 * k / den;
}

struct ChainSample {
    cx z{};
    double t = 0.0;
    cx L{};
    cx G{};
    cx w{};
    cx p{};
};

struct ChainReport {
    double sup_abs_w = 0.0;
    double min_re_p = 0.0;
    ChainSample worst;
    std::int64_t samples = 0;
    std::optional<double> k;
    bool passed = false;
};

/// t in {0, 0.05, ..., 3} together with {4, 6, 10}.
inline std::vector<double> default_times() {
    std::vector<double> ts;
    for (int i = 0; i <= 60; ++i) ts.push_back(0.05 * i);
    for (double t : {4.0, 6.0, 10.0}) ts.push_back(t);
    return ts;
}

/// Polar sample of the open disk used when no points are given.
inline std::vector<cx> default_points(int n_angles = 48) {
    std::vector<cx> zs;
    for (double r : {0.05, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999})
        for (int j = 0; j < n_angles; ++j) zs.push_back(std::polar(r, -pi + 2.0 * pi * j / n_angles));
    return zs;
}

/// Checks |w| < 1 (Re p > 0) and, when k is given, |w| <= k over all
/// (z, t) samples. The worst sample also carries L(z,t).
inline ChainReport verify_chain(const ChainParams& params, const std::vector<cx>& zs, const std::vector<double>& ts,
                                std::optional<double> k = std::nullopt) {
    if (k && !(*k >= 0.0 && *k < 1.0)) throw InvalidArgument("k must lie in [0, 1)");
    const Chain chain(params);
    ChainReport rep;
    rep.k = k;
    rep.min_re_p = std::numeric_limits<double>::infinity();
    double worst = -1.0;
    for (cx z : zs) {
        if (!(std::abs(z) < 1.0)) throw DomainError("verify_chain: sample points must satisfy |z| < 1");
        for (double t : ts) {
            if (!(t >= 0.0)) throw InvalidArgument("verify_chain: t must be non-negative");
            const cx G = chain.transfer_G(z, t);
            const double m = params.m;
            const cx w = 2.0 / (m + 1.0) * G - (m - 1.0) / (m + 1.0);
            ++rep.samples;
            const double aw = std::abs(w);
            if (std::abs(1.0 - w) > 1e-14) rep.min_re_p = std::min(rep.min_re_p, ((1.0 + w) / (1.0 - w)).real());
            else rep.min_re_p = -std::numeric_limits<double>::infinity();
            if (aw > worst) {
                worst = aw;
                rep.worst = {z, t, {}, G, w, {}};
            }
        }
    }
    rep.sup_abs_w = worst;
    if (rep.samples > 0) {
        auto& s = rep.worst;
        if (std::abs(1.0 - s.w) > 1e-14) s.p = (1.0 + s.w) / (1.0 - s.w);
        s.L = chain.value(s.z, s.t);
    }
    rep.passed = rep.samples > 0 && rep.sup_abs_w < 1.0 && (!k || rep.sup_abs_w <= *k);
    return rep;
}

}  // namespace univalens::loewner
