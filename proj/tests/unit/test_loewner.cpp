#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "univalens/loewner.hpp"
#include "univalens/quad.hpp"

using namespace univalens;
using namespace univalens::loewner;
using testing_support::Rng;

namespace {

ChainParams trivial(double m, cx beta = 1.0) {
    ChainParams p;
    p.f = expr::parse("z");
    p.g = criteria::FnSource(expr::parse("1"));
    p.h = criteria::FnSource(criteria::Preset::zero);
    p.beta = beta;
    p.m = m;
    return p;
}

ChainParams general(const char* f, const char* g, const char* h, cx alpha, cx beta, double m) {
    ChainParams p;
    p.f = expr::parse(f);
    p.g = criteria::FnSource(expr::parse(g));
    p.h = criteria::FnSource(expr::parse(h));
    p.alpha = alpha;
    p.beta = beta;
    p.m = m;
    return p;
}

ChainParams example1() {
    criteria::CriterionSpec s;
    s.variant = criteria::Variant::corollary_c34;
    s.beta = 2.0;
    s.m = 1.0;
    return ChainParams::from(criteria::resolve_preset(s, expr::parse("z/(1 - z^2/2)")));
}

}  // namespace

TEST(A1, Examples) {
    for (double m : {0.5, 1.0, 2.0})
        for (double t : {0.0, 0.5, 3.0}) EXPECT_NEAR(std::abs(a1(trivial(m), t) - std::exp(m * t)), 0.0, 1e-12 * std::exp(m * t));
    ChainParams p = trivial(1.0, 2.0);
    p.alpha = 0.3;
    p.g = criteria::FnSource(expr::parse("1"));
    EXPECT_NEAR(std::abs(a1(p, 1.0) - std::sqrt(0.7 * std::exp(2.0) + 0.3 * std::exp(-2.0))), 0.0, 1e-14);
    EXPECT_NEAR(a1(p, 1.0).real(), 2.283187, 1e-6);
    Rng rng(1);
    for (int n = 0; n < 50; ++n) {
        ChainParams q = trivial(rng.uniform(0.1, 3.0), {rng.uniform(0.1, 3.0), rng.uniform(-2.0, 2.0)});
        q.alpha = {rng.uniform(-2.0, 0.49), rng.uniform(-2.0, 2.0)};
        EXPECT_NEAR(std::abs(a1(q, 0.0) - 1.0), 0.0, 1e-14);
        EXPECT_GT(std::abs(a1(q, 2.0)), 0.0);
    }
    EXPECT_THROW(a1(trivial(1.0), -1.0), InvalidArgument);
}

TEST(A1, ContinuousInTimeForComplexBeta) {
    ChainParams p = trivial(2.0, {0.5, 2.0});
    p.alpha = {0.2, 0.3};
    const Chain chain(p);
    // the closed form [(1-alpha) e^{beta m t} + alpha e^{-beta t}]^{1/beta} up to the branch
    for (double t = 0.0; t <= 5.0; t += 0.01) {
        const cx beta = p.beta;
        const cx base = (1.0 - p.alpha) * std::exp(beta * p.m * t) + p.alpha * std::exp(-beta * t);
        const cx ours = chain.a1(t);
        EXPECT_NEAR(std::abs(std::pow(ours, beta) - base), 0.0, 1e-10 * std::abs(base));
        if (t > 0.0) {
            EXPECT_LT(std::abs(ours - chain.a1(t - 0.01)), 0.2 * std::abs(ours)) << t;
        }
    }
}

TEST(A1, Unbounded) {
    Rng rng(2);
    for (int n = 0; n < 50; ++n) {
        ChainParams p = trivial(rng.uniform(1.0, 3.0), {rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)});
        p.alpha = {rng.uniform(-1.0, 0.45), rng.uniform(-1.0, 1.0)};
        EXPECT_GT(std::abs(a1(p, 10.0)), 100.0 * std::abs(a1(p, 0.0)));
    }
}

TEST(ChainValue, TrivialFamily) {
    Rng rng(3);
    for (double m : {0.5, 1.0, 2.0, 3.0})
        for (cx beta : {cx(1.0), cx(2.0), cx(0.5, 1.0)}) {
            const Chain chain(trivial(m, beta));
            for (int n = 0; n < 10; ++n) {
                const cx z = rng.in_disk(1.0);
                const double t = rng.uniform(0.0, 4.0);
                EXPECT_NEAR(std::abs(chain.value(z, t) - std::exp(m * t) * z), 0.0, 1e-11 * std::exp(m * t));
            }
            EXPECT_EQ(chain.value(0.0, 1.0), cx(0.0));
        }
}

TEST(ChainValue, TimeZeroIsTheOperator) {
    Rng rng(4);
    for (const ChainParams& p : {example1(), general("z*exp(z)", "1 + z", "0.3*z", {0.1, 0.1}, {1.5, 0.5}, 2.0)}) {
        const Chain chain(p);
        for (int n = 0; n < 30; ++n) {
            const cx z = rng.in_disk(0.9);
            EXPECT_LT(std::abs(chain.value(z, 0.0) - quad::integral_operator(p.f, p.beta, z)), 1e-9);
        }
    }
}

TEST(ChainValue, BranchNormalization) {
    const ChainParams p = general("z*exp(z)", "1 + z/2", "0.2 + 0.1*z", {-0.3, 0.2}, {1.3, 0.6}, 1.5);
    const Chain chain(p);
    for (double t : {0.0, 0.5, 2.0})
        for (double r : {1e-6, 1e-5}) {
            const cx z = std::polar(r, 2.0);
            EXPECT_LT(std::abs(chain.value(z, t) / z / chain.a1(t) - 1.0), 1e-5);
        }
}

TEST(ChainValue, NormalizationRateForSmallRealPartOfBeta) {
    // the z^beta h term makes L/z - a1 decay like |z|^{Re beta}
    const ChainParams p = general("z*exp(z)", "1 + z/2", "0.2 + 0.1*z", {-0.3, 0.2}, {0.7, 0.6}, 1.5);
    const Chain chain(p);
    const double t = 1.0;
    auto defect = [&](double r) {
        const cx z = std::polar(r, 2.0);
        return std::abs(chain.value(z, t) / z / chain.a1(t) - 1.0);
    };
    const double ratio = defect(1e-6) / defect(1e-4);
    EXPECT_NEAR(std::log10(ratio), -2.0 * 0.7, 0.05);
}

TEST(ChainValue, Guards) {
    const Chain chain(trivial(1.0));
    EXPECT_THROW(chain.value(1.5, 0.0), DomainError);
    EXPECT_THROW(chain.value(0.5, -0.1), InvalidArgument);
    // phi3 = 1 + (e^{mt} - e^{-t}) z h vanishes for h = -1 at z e^{..} = 1/(e - 1/e)
    const Chain bad(general("z", "1", "-1", 0.0, 1.0, 1.0));
    const double t = 1.0;
    const double z0 = 1.0 / (std::exp(t) - std::exp(-t));
    EXPECT_THROW(bad.value(z0, t), PoleError);
}

TEST(TransferG, Examples) {
    Rng rng(5);
    const Chain tr(trivial(2.0, {1.5, 0.5}));
    for (int n = 0; n < 20; ++n) EXPECT_EQ(tr.transfer_G(rng.in_disk(1.0), rng.uniform(0.0, 5.0)), cx(0.0));

    const ChainParams p = general("z*exp(z)", "1 + z/2", "0.2*z", {0.1, -0.2}, {1.2, 0.3}, 1.7);
    const Chain chain(p);
    for (int n = 0; n < 20; ++n) {
        const cx z = rng.in_disk(1.0);
        const cx fp = p.f.jet<1>(z).c[1];
        const cx g = 1.0 + z / 2.0;
        EXPECT_NEAR(std::abs(chain.transfer_G(z, 0.0) - (fp / (g - p.alpha) - 1.0)), 0.0, 1e-13);
    }
}

TEST(TransferG, StaticDynamicIdentity) {
    Rng rng(6);
    for (int n = 0; n < 200; ++n) {
        const double m = rng.uniform(0.5, 2.5);
        const cx beta{rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)};
        const cx alpha{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
        ChainParams p = general("z + 0.2*z^2", "1 + 0.1*z", "0.1 + 0.05*z", alpha, beta, m);
        const Chain chain(p);
        const criteria::Criterion c(p.f, p.g, p.h, alpha, beta, m, criteria::Variant::general,
                                    criteria::FirstCenter::proof_form, std::nullopt);
        const double theta = rng.uniform(-pi, pi);
        const double t = rng.uniform(0.02, 1.5);
        const double lhs = std::abs(chain.transfer_G(std::polar(1.0, theta), t) - 0.5 * (m - 1.0));
        const double rhs = criteria::eval_main_condition(c, std::polar(std::exp(-t), theta)).modulus;
        EXPECT_NEAR(lhs, rhs, 1e-10);
    }
}

TEST(TransferG, FirstConditionAtTimeZero) {
    // G(z,0) - (m-1)/2 = f'/(g-alpha) - (m+1)/2, the proof form of the first condition
    const ChainParams p = general("z*exp(z)", "1 + z/2", "0.2*z", {0.1, -0.2}, {1.2, 0.3}, 1.7);
    const Chain chain(p);
    const criteria::Criterion c(p.f, p.g, p.h, p.alpha, p.beta, p.m, criteria::Variant::general,
                                criteria::FirstCenter::proof_form, std::nullopt);
    Rng rng(7);
    for (int n = 0; n < 50; ++n) {
        const cx z = rng.in_disk(0.99);
        EXPECT_NEAR(std::abs(chain.transfer_G(z, 0.0) - 0.5 * (p.m - 1.0) - criteria::eval_first_condition(c, z).value),
                    0.0, 1e-13);
    }
}

TEST(TransferG, SatisfiesTheLoewnerEquation) {
    // z dL/dz = p dL/dt, with both derivatives by central differences; an
    // oracle independent of the closed-form G
    Rng rng(8);
    for (const ChainParams& p : {general("z*exp(z)", "1 + z/2", "0.2 + 0.1*z", {0.1, -0.2}, {1.2, 0.3}, 1.7),
                                 general("z + 0.2*z^2", "exp(z/3)", "0.1*z", 0.0, 1.0, 1.0), example1()}) {
        const Chain chain(p);
        for (int n = 0; n < 20; ++n) {
            const cx z = rng.in_annulus(0.2, 0.8);
            const double t = rng.uniform(0.1, 1.5);
            const double hz = 1e-5, ht = 1e-5;
            const cx Lz = (chain.value(z + hz, t) - chain.value(z - hz, t)) / (2.0 * hz);
            const cx Lt = (chain.value(z, t + ht) - chain.value(z, t - ht)) / (2.0 * ht);
            const cx p_fd = z * Lz / Lt;
            const cx p_alg = chain.transfer_w_p(z, t).p;
            EXPECT_LT(std::abs(p_fd - p_alg) / std::max(1.0, std::abs(p_alg)), 1e-6)
                << "z=" << to_string(z) << " t=" << t;
        }
    }
}

TEST(TransferWP, TrivialFamily) {
    for (double m : {1.0, 2.0, 3.0}) {
        const auto [w, p] = Chain(trivial(m)).transfer_w_p({0.3, 0.1}, 0.7);
        EXPECT_NEAR(std::abs(w + (m - 1.0) / (m + 1.0)), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(p - 1.0 / m), 0.0, 1e-15);
    }
}

TEST(BeckerDisk, MembershipForms) {
    Rng rng(9);
    for (int n = 0; n < 2000; ++n) {
        const double k = rng.uniform(0.0, 0.99);
        const cx w = rng.in_disk(1.0);
        const cx p = (1.0 + w) / (1.0 - w);
        if (std::abs(std::abs(w) - k) < 1e-9) continue;
        const bool inside = std::abs(w) <= k;
        EXPECT_EQ(in_becker_disk(p, k), inside);
        EXPECT_EQ(in_becker_disk_euclidean(p, k), inside);
        EXPECT_EQ(p.real() > 0.0, std::abs(w) < 1.0);
    }
}

TEST(VerifyChain, TrivialFamily) {
    const auto zs = default_points(12);
    const auto ts = default_times();
    const ChainReport r2 = verify_chain(trivial(2.0), zs, ts, 1.0 / 3.0 + 1e-12);
    EXPECT_NEAR(r2.sup_abs_w, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(r2.min_re_p, 0.5, 1e-15);
    EXPECT_TRUE(r2.passed);
    EXPECT_FALSE(verify_chain(trivial(2.0), zs, ts, 0.3).passed);
    EXPECT_EQ(r2.samples, static_cast<std::int64_t>(zs.size() * ts.size()));

    const ChainReport r1 = verify_chain(trivial(1.0), zs, ts, 0.0);
    EXPECT_EQ(r1.sup_abs_w, 0.0);
    EXPECT_TRUE(r1.passed);
    EXPECT_THROW(verify_chain(trivial(1.0), {cx(1.0)}, ts), DomainError);
}

TEST(VerifyChain, WorkedExample) {
    const ChainReport r = verify_chain(example1(), default_points(), default_times());
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.sup_abs_w, 24.0 / 27.0);
    EXPECT_GT(r.min_re_p, 0.0);
    EXPECT_NEAR(std::abs(r.worst.L - Chain(example1()).value(r.worst.z, r.worst.t)), 0.0, 0.0);
}

TEST(Defaults, TimesAndPoints) {
    const auto ts = default_times();
    EXPECT_EQ(ts.size(), 64u);
    EXPECT_EQ(ts.front(), 0.0);
    EXPECT_EQ(ts.back(), 10.0);
    for (cx z : default_points()) EXPECT_LT(std::abs(z), 1.0);
}
