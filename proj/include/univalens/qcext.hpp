#pragma once

// Becker-type extension of F_beta to the plane through its Loewner chain,
//
//   F(z) = L(z, 0)                  for |z| < 1,
//   F(z) = L(z/|z|, log|z|)         for |z| >= 1,
//
// numerical Beltrami coefficients of F, and sampling-based univalence
// evidence (critical points and argument-principle windings).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "univalens/complex.hpp"
#include "univalens/criteria.hpp"
#include "univalens/error.hpp"
#include "univalens/loewner.hpp"

namespace univalens::qcext {

class ExtensionMap {
public:
    explicit ExtensionMap(loewner::ChainParams params) : chain_(std::move(params)) {}

    const loewner::Chain& chain() const { return chain_; }

    cx operator()(cx z) const {
        const double r = std::abs(z);
        if (r < 1.0) return chain_.value(z, 0.0);
        return chain_.value(z / r, std::log(r));
    }

private:
    loewner::Chain chain_;
};

inline cx extend(const ExtensionMap& map, cx z) { return map(z); }

struct BeltramiSample {
    cx z{};
    cx mu{};
    double mu_abs = 0.0;
    double fd_step = 0.0;
};

/// Wirtinger derivatives of any map by central differences with the given
/// step: d/dz = (Dx - i Dy)/2, d/dzbar = (Dx + i Dy)/2.
template <typename Map>
BeltramiSample beltrami_of(const Map& F, cx z, double step) {
    if (!(step > 0.0)) throw InvalidArgument("beltrami: step must be positive");
    const cx i{0.0, 1.0};
    const cx dx = (F(z + step) - F(z - step)) / (2.0 * step);
    const cx dy = (F(z + i * step) - F(z - i * step)) / (2.0 * step);
    const cx dz = 0.5 * (dx - i * dy);
    const cx dzbar = 0.5 * (dx + i * dy);
    if (std::abs(dz) < 1e-12) throw EvaluationError("beltrami: degenerate derivative at z = " + to_string(z));
    BeltramiSample s;
    s.z = z;
    s.mu = dzbar / dz;
    s.mu_abs = std::abs(s.mu);
    s.fd_step = step;
    return s;
}

/// Beltrami coefficient of the exterior extension; step defaults to 1e-5 |z|.
inline BeltramiSample beltrami(const ExtensionMap& map, cx z, std::optional<double> step = std::nullopt) {
    const double h = step.value_or(1e-5 * std::abs(z));
    if (!(std::abs(z) > 1.0 + 2.0 * h))
        throw DomainError("beltrami: need |z| > 1 + 2 step for the exterior rule");
    return beltrami_of(map, z, h);
}

struct KEstimate {
    double k = 0.0;
    cx argmax{};
    std::int64_t samples = 0;
};

/// sup |mu| over a polar grid of the annulus r_in <= |z| <= r_out; radii
/// are uniform in log|z| (the chain time).
inline KEstimate estimate_k_detailed(const ExtensionMap& map, double r_in, double r_out, int n_radii = 16,
                                     int n_angles = 64) {
    if (!(1.0 < r_in && r_in < r_out)) throw InvalidArgument("estimate_k: need 1 < r_in < r_out");
    if (n_radii < 2 || n_angles < 1) throw InvalidArgument("estimate_k: grid too small");
    KEstimate est;
    est.k = -1.0;
    const double lo = std::log(r_in), hi = std::log(r_out);
    for (int i = 0; i < n_radii; ++i) {
        const double r = std::exp(lo + (hi - lo) * i / (n_radii - 1));
        for (int j = 0; j < n_angles; ++j) {
            const cx z = std::polar(r, -pi + 2.0 * pi * j / n_angles);
            const BeltramiSample s = beltrami(map, z);
            ++est.samples;
            if (s.mu_abs > est.k) {
                est.k = s.mu_abs;
                est.argmax = z;
            }
        }
    }
    return est;
}

inline double estimate_k(const ExtensionMap& map, double r_in, double r_out, int n_radii = 16, int n_angles = 64) {
    return estimate_k_detailed(map, r_in, r_out, n_radii, n_angles).k;
}

struct QcReport {
    criteria::SupReport first;
    criteria::SupReport main;
    bool conditions_hold = false;
    std::optional<KEstimate> measured;
    std::optional<bool> cross_check_ok;
    bool overall = false;
};

struct QcOptions {
    bool cross_validate = true;
    double r_in = 1.001;
    double r_out = 5.0;
    int n_radii = 16;
    int n_angles = 64;
    double tolerance = 5e-3;
};

/// Both conditions with bounds scaled by k; on success the measured
/// Beltrami coefficient of the extension is compared with k.
inline QcReport check_qc_criterion(const criteria::Criterion& c, const criteria::GridSpec& grid = {},
                                   const QcOptions& opts = {}) {
    if (!c.k()) throw InvalidArgument("check_qc_criterion needs k");
    const criteria::CriterionReport cr = criteria::check_criterion(c, grid);
    QcReport rep;
    rep.first = cr.first;
    rep.main = cr.main;
    rep.conditions_hold = cr.overall;
    rep.overall = cr.overall;
    if (cr.overall && opts.cross_validate) {
        const ExtensionMap map(loewner::ChainParams::from(c));
        rep.measured = estimate_k_detailed(map, opts.r_in, opts.r_out, opts.n_radii, opts.n_angles);
        rep.cross_check_ok = rep.measured->k <= *c.k() + opts.tolerance;
        rep.overall = *rep.cross_check_ok;
    }
    return rep;
}

inline QcReport check_qc_criterion(const criteria::CriterionSpec& spec, const expr::FunctionExpr& f,
                                   const criteria::GridSpec& grid = {}, const QcOptions& opts = {}) {
    return check_qc_criterion(criteria::resolve_preset(spec, f), grid, opts);
}

// ---------------------------------------------------------------- evidence

/// Winding number of a closed sampled curve around a point: the sum of
/// principal argument increments between consecutive samples over 2 pi.
inline int winding_number(const std::vector<cx>& curve, cx target, double guard = 1e-9) {
    if (curve.size() < 3) throw InvalidArgument("winding_number: curve needs at least three samples");
    double total = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const cx a = curve[k] - target;
        const cx b = curve[(k + 1) % curve.size()] - target;
        if (std::abs(a) < guard)
            throw EvaluationError("winding number: curve passes within " + std::to_string(guard) + " of " +
                                  to_string(target));
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

struct CircleEvidence {
    double radius = 0.0;
    int critical_points = 0;   // zeros of fn' inside the circle
    int min_winding = 0;
    int max_winding = 0;
    cx worst_target{};
};

struct EvidenceReport {
    double min_abs_derivative = 0.0;
    cx argmin_derivative{};
    std::vector<CircleEvidence> circles;
    std::int64_t evaluations = 0;
    bool passed = false;
};

struct EvidenceOptions {
    std::vector<double> radii{0.5, 0.8, 0.95};
    int samples_per_circle = 4096;
    double fd_step = 1e-6;
    double critical_threshold = 1e-8;
};

/// Sampling evidence (never a proof) that fn is univalent on the disk:
///  - min |fn'| over the grid by central differences;
///  - for each circle, the zeros of fn' inside it, counted by the winding of
///    d fn(r e^{i theta})/d theta (which equals 1 + #zeros of fn');
///  - for targets w = fn((r/2) e^{i phi}), the winding of fn(r e^{i theta}) - w,
///    which must be exactly 1.
inline EvidenceReport univalence_evidence(const std::function<cx(cx)>& fn, const criteria::GridSpec& grid,
                                          int probes, const EvidenceOptions& opts = {}) {
    grid.validate();
    if (probes < 1) throw InvalidArgument("univalence_evidence: probes must be >= 1");
    EvidenceReport rep;
    rep.min_abs_derivative = std::numeric_limits<double>::infinity();
    const double h = opts.fd_step;
    for (double r : grid.radii())
        for (double theta : grid.angles()) {
            const cx z = std::polar(r, theta);
            const cx d = (fn(z + h) - fn(z - h)) / (2.0 * h);
            rep.evaluations += 2;
            if (std::abs(d) < rep.min_abs_derivative) {
                rep.min_abs_derivative = std::abs(d);
                rep.argmin_derivative = z;
            }
        }

    bool ok = rep.min_abs_derivative > opts.critical_threshold;
    const int n = opts.samples_per_circle;
    for (double r : opts.radii) {
        std::vector<cx> curve(n);
        for (int k = 0; k < n; ++k) curve[k] = fn(std::polar(r, 2.0 * pi * k / n));
        rep.evaluations += n;

        std::vector<cx> tangent(n);
        const double dtheta = 2.0 * pi / n;
        for (int k = 0; k < n; ++k) tangent[k] = (curve[(k + 1) % n] - curve[(k + n - 1) % n]) / (2.0 * dtheta);

        CircleEvidence ce;
        ce.radius = r;
        ce.critical_points = winding_number(tangent, cx{}, 0.0) - 1;
        ce.min_winding = std::numeric_limits<int>::max();
        ce.max_winding = std::numeric_limits<int>::min();
        for (int j = 0; j < probes; ++j) {
            const cx target = fn(std::polar(0.5 * r, -pi + 2.0 * pi * j / probes));
            ++rep.evaluations;
            const int wn = winding_number(curve, target);
            if (wn != 1 && (ce.min_winding == 1 || ce.min_winding == std::numeric_limits<int>::max()))
                ce.worst_target = target;
            ce.min_winding = std::min(ce.min_winding, wn);
            ce.max_winding = std::max(ce.max_winding, wn);
        }
        ok = ok && ce.critical_points == 0 && ce.min_winding == 1 && ce.max_winding == 1;
        rep.circles.push_back(ce);
    }
    rep.passed = ok;
    return rep;
}

}  // namespace univalens::qcext
