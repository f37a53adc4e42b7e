#pragma once

// Principal-branch elementary functions shared by every module.

#include <cmath>
#include <complex>
#include <numbers>

#include "univalens/error.hpp"

namespace univalens {

using cx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Principal logarithm with arg in (-pi, pi]. A signed zero imaginary part
/// on the negative real axis is mapped to +pi, unlike std::log.
inline cx principal_log(cx w) {
    double arg = std::arg(w);
    if (arg == -pi) arg = pi;
    return {std::log(std::abs(w)), arg};
}

/// exp(e * Log w). w = 0 is allowed only when Re e > 0.
inline cx principal_pow(cx w, cx e) {
    if (w == cx{}) {
        if (e.real() > 0.0) return {};
        throw DomainError("principal_pow: 0 raised to exponent " + to_string(e) +
                          " with non-positive real part");
    }
    if (e == cx{}) return {1.0, 0.0};
    return std::exp(e * principal_log(w));
}

/// r^e = exp(e ln r) for a positive real base; |r^e| = r^{Re e}.
inline cx real_pow_complex(double r, cx e) {
    if (!(r > 0.0)) throw DomainError("real_pow_complex: base must be positive");
    if (e == cx{}) return {1.0, 0.0};
    return std::exp(e * std::log(r));
}

/// exp(w) - 1 without cancellation for small |w|.
inline cx cexpm1(cx w) {
    const double x = w.real();
    const double y = w.imag();
    const double s = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

/// Logarithm of a nonvanishing path value w(s), s in [0,1], continued from
/// a known log at s = 0. The path is bisected until consecutive principal
/// arguments differ by less than pi/4.
template <typename Path>
cx continued_log(Path&& path, cx w0, cx log_w0, int max_depth = 24) {
    struct Walker {
        Path& path;
        int max_depth;
        cx step(double s0, cx w0, cx log0, double s1, cx w1, int depth) {
            const cx delta = principal_log(w1 / w0);
            if (std::abs(delta.imag()) < pi / 4.0) return log0 + delta;
            if (depth >= max_depth)
                throw EvaluationError("branch continuation did not resolve along the path");
            const double sm = 0.5 * (s0 + s1);
            const cx wm = path(sm);
            if (wm == cx{}) throw EvaluationError("branch continuation hit a zero of the path");
            const cx logm = step(s0, w0, log0, sm, wm, depth + 1);
            return step(sm, wm, logm, s1, w1, depth + 1);
        }
    };
    const cx w1 = path(1.0);
    if (w1 == cx{}) throw EvaluationError("branch continuation: path value vanishes");
    Walker walker{path, max_depth};
    return walker.step(0.0, w0, log_w0, 1.0, w1, 0);
}

}  // namespace univalens
