#pragma once

// Truncated Taylor arithmetic in one complex variable.
//
// A Jet<N> holds the normalized coefficients c[k] = f^(k)(z0) / k! of a
// function about an expansion point. Arithmetic and the elementary functions
// below propagate all N+1 coefficients, so evaluating an expression on
// Jet<N>::variable(z0) yields exact derivatives up to order N.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

#include "univalens/complex.hpp"
#include "univalens/error.hpp"

namespace univalens {

template <std::size_t N>
struct Jet {
    std::array<cx, N + 1> c{};

    static constexpr std::size_t order = N;

    static Jet constant(cx v) {
        Jet j;
        j.c[0] = v;
        return j;
    }

    /// The identity function expanded about z0.
    static Jet variable(cx z0) {
        Jet j;
        j.c[0] = z0;
        if constexpr (N >= 1) j.c[1] = 1.0;
        return j;
    }

    cx value() const { return c[0]; }

    /// k-th derivative at the expansion point.
    cx derivative(std::size_t k) const {
        double fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        return c[k] * fact;
    }

    bool is_constant() const {
        for (std::size_t k = 1; k <= N; ++k)
            if (c[k] != cx{}) return false;
        return true;
    }

    Jet operator-() const {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) r.c[k] = -c[k];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
        return *this;
    }
    Jet& operator*=(cx s) {
        for (auto& v : c) v *= s;
        return *this;
    }

    friend bool operator==(const Jet&, const Jet&) = default;
};

template <std::size_t N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <std::size_t N>
Jet<N> operator+(Jet<N> a, cx s) { a.c[0] += s; return a; }
template <std::size_t N>
Jet<N> operator+(cx s, Jet<N> a) { a.c[0] += s; return a; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a, cx s) { a.c[0] -= s; return a; }
template <std::size_t N>
Jet<N> operator-(cx s, const Jet<N>& a) { return (-a) + s; }
template <std::size_t N>
Jet<N> operator*(Jet<N> a, cx s) { return a *= s; }
template <std::size_t N>
Jet<N> operator*(cx s, Jet<N> a) { return a *= s; }

template <std::size_t N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    for (std::size_t k = 0; k <= N; ++k) {
        cx acc{};
        for (std::size_t j = 0; j <= k; ++j) acc += a.c[j] * b.c[k - j];
        r.c[k] = acc;
    }
    return r;
}

template <std::size_t N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    if (b.c[0] == cx{}) throw EvaluationError("division by zero");
    Jet<N> q;
    for (std::size_t k = 0; k <= N; ++k) {
        cx acc = a.c[k];
        for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
        q.c[k] = acc / b.c[0];
    }
    return q;
}

template <std::size_t N>
Jet<N> operator/(const Jet<N>& a, cx s) {
    if (s == cx{}) throw EvaluationError("division by zero");
    return a * (1.0 / s);
}

template <std::size_t N>
Jet<N> operator/(cx s, const Jet<N>& b) {
    return Jet<N>::constant(s) / b;
}

template <std::size_t N>
Jet<N> exp(const Jet<N>& a) {
    Jet<N> e;
    e.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        cx acc{};
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c[j] * e.c[k - j];
        e.c[k] = acc / static_cast<double>(k);
    }
    return e;
}

/// Principal logarithm.
template <std::size_t N>
Jet<N> log(const Jet<N>& a) {
    if (a.c[0] == cx{}) throw EvaluationError("log of zero");
    Jet<N> l;
    l.c[0] = principal_log(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        cx acc = a.c[k];
        for (std::size_t j = 1; j < k; ++j)
            acc -= static_cast<double>(j) / static_cast<double>(k) * l.c[j] * a.c[k - j];
        l.c[k] = acc / a.c[0];
    }
    return l;
}

template <std::size_t N>
void sin_cos(const Jet<N>& a, Jet<N>& s, Jet<N>& co) {
    s.c[0] = std::sin(a.c[0]);
    co.c[0] = std::cos(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        cx as{}, ac{};
        for (std::size_t j = 1; j <= k; ++j) {
            const cx ja = static_cast<double>(j) * a.c[j];
            as += ja * co.c[k - j];
            ac -= ja * s.c[k - j];
        }
        s.c[k] = as / static_cast<double>(k);
        co.c[k] = ac / static_cast<double>(k);
    }
}

template <std::size_t N>
Jet<N> sin(const Jet<N>& a) {
    Jet<N> s, c;
    sin_cos(a, s, c);
    return s;
}

template <std::size_t N>
Jet<N> cos(const Jet<N>& a) {
    Jet<N> s, c;
    sin_cos(a, s, c);
    return c;
}

/// Integer power by repeated squaring; valid at a zero base.
template <std::size_t N>
Jet<N> ipow(const Jet<N>& a, std::int64_t n) {
    if (n < 0) return 1.0 / ipow(a, -n);
    Jet<N> result = Jet<N>::constant(1.0);
    Jet<N> base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

/// Principal power a^e for a constant complex exponent.
template <std::size_t N>
Jet<N> pow(const Jet<N>& a, cx e) {
    if (e.imag() == 0.0 && std::abs(e.real()) <= 64.0 && e.real() == std::trunc(e.real()))
        return ipow(a, static_cast<std::int64_t>(e.real()));
    if (a.c[0] == cx{}) {
        if (a.is_constant() && e.real() > 0.0) return Jet<N>::constant(0.0);
        throw EvaluationError("non-integer power of zero");
    }
    Jet<N> p;
    p.c[0] = principal_pow(a.c[0], e);
    for (std::size_t k = 1; k <= N; ++k) {
        cx acc{};
        for (std::size_t j = 1; j <= k; ++j)
            acc += (e * static_cast<double>(j) - static_cast<double>(k - j)) * a.c[j] * p.c[k - j];
        p.c[k] = acc / (static_cast<double>(k) * a.c[0]);
    }
    return p;
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
    return pow(a, cx{0.5, 0.0});
}

/// Derivative of the expanded function, one order lower.
template <std::size_t N>
    requires(N >= 1)
Jet<N - 1> differentiate(const Jet<N>& a) {
    Jet<N - 1> d;
    for (std::size_t k = 0; k < N; ++k) d.c[k] = static_cast<double>(k + 1) * a.c[k + 1];
    return d;
}

template <std::size_t M, std::size_t N>
    requires(M <= N)
Jet<M> truncate(const Jet<N>& a) {
    Jet<M> r;
    for (std::size_t k = 0; k <= M; ++k) r.c[k] = a.c[k];
    return r;
}

/// Compose a polynomial sum_k coeffs[k] * x^k with a jet by Horner's rule.
template <std::size_t N, std::size_t K>
Jet<N> polyval(const std::array<cx, K>& coeffs, const Jet<N>& x) {
    Jet<N> r = Jet<N>::constant(coeffs[K - 1]);
    for (std::size_t i = K - 1; i-- > 0;) r = r * x + coeffs[i];
    return r;
}

}  // namespace univalens
