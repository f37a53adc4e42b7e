#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "univalens/complex.hpp"

namespace testing_support {

using univalens::cx;
using univalens::pi;

/// Fixed-seed generator so that every property test is reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }

    /// Point with r_lo <= |z| <= r_hi and uniform argument.
    cx in_annulus(double r_lo, double r_hi) { return std::polar(uniform(r_lo, r_hi), uniform(-pi, pi)); }
    cx in_disk(double r_max) { return in_annulus(0.0, r_max); }

private:
    std::mt19937_64 eng_;
};

inline double rel_err(cx a, cx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testing_support
