#include <gtest/gtest.h>

#include <string>

#include "support.hpp"
#include "univalens/expr.hpp"

using namespace univalens;
using namespace univalens::expr;
using testing_support::Rng;
using K = Node::Kind;

TEST(Parse, Atoms) {
    EXPECT_EQ(parse("z").root().kind, K::var);
    EXPECT_EQ(parse(" i ").root().kind, K::imag_unit);
    EXPECT_EQ(parse("pi").root().kind, K::pi);
    EXPECT_EQ(parse("2.5e-1").root().number, 0.25);
}

TEST(Parse, WorkedExampleTree) {
    const FunctionExpr f = parse("z/(1 - z^2/2)");
    const NodePtr expected = make::binary(
        K::div, make::var(),
        make::binary(K::sub, make::number(1),
                     make::binary(K::div, make::pow(make::var(), make::number(2)), make::number(2))));
    EXPECT_TRUE(structurally_equal(f.root(), *expected));
}

TEST(Parse, Precedence) {
    // ^ above unary minus, right associative
    const auto& neg = parse("-z^2").root();
    ASSERT_EQ(neg.kind, K::neg);
    EXPECT_EQ(neg.lhs->kind, K::pow);
    const auto& tower = parse("z^2^3").root();
    ASSERT_EQ(tower.kind, K::pow);
    EXPECT_EQ(tower.exponent, cx(8.0));
    // left associative - and /
    EXPECT_EQ(parse("1-2-3")(0.0), cx(-4.0));
    EXPECT_EQ(parse("8/4/2")(0.0), cx(1.0));
    EXPECT_EQ(parse("2*-z")(1.0), cx(-2.0));
    EXPECT_EQ(parse("z^-1")(4.0), cx(0.25));
}

TEST(Parse, ExpMinusOne) {
    const FunctionExpr f = parse("exp(z) - 1");
    ASSERT_EQ(f.root().kind, K::sub);
    EXPECT_EQ(f.root().lhs->kind, K::call);
    EXPECT_EQ(f(0.0), cx(0.0));
}

TEST(Parse, SyntaxErrorOffsets) {
    try {
        parse("z/(1-");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset(), 6u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse("z + * 2");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset(), 5u);
    }
    try {
        parse("(z");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset(), 3u);
        EXPECT_EQ(e.expected().front(), "')'");
    }
    EXPECT_THROW(parse(""), SyntaxError);
    EXPECT_THROW(parse("z z"), SyntaxError);
    EXPECT_THROW(parse("z^z"), SyntaxError);  // exponents must be constant
    EXPECT_THROW(parse("1e"), SyntaxError);
}

TEST(Parse, UnknownIdentifier) {
    try {
        parse("1 + tan(z)");
        FAIL();
    } catch (const UnknownIdentifier& e) {
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_EQ(e.name(), "tan");
    }
    EXPECT_THROW(parse("x"), UnknownIdentifier);
}

TEST(EvalJet, SpecExamples) {
    const Jet3 id = eval_jet(parse("z"), {0.3, -0.2});
    EXPECT_EQ(id.d0(), cx(0.3, -0.2));
    EXPECT_EQ(id.d1(), cx(1.0));
    EXPECT_EQ(id.d2(), cx(0.0));
    EXPECT_EQ(id.d3(), cx(0.0));

    const Jet3 e = eval_jet(parse("exp(z)"), 0.0);
    for (int k = 0; k <= 3; ++k) EXPECT_NEAR(std::abs(e.d[k] - 1.0), 0.0, 1e-15);

    // z/(1 - z^2/2) = z + z^3/2 + ..., so (0, 1, 0, 3)
    const Jet3 f = eval_jet(parse("z/(1 - z^2/2)"), 0.0);
    EXPECT_NEAR(std::abs(f.d0()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.d1() - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.d2()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.d3() - 3.0), 0.0, 1e-14);
}

TEST(EvalJet, LowerOrderFlagsUnfilledEntries) {
    const Jet3 j = eval_jet(parse("exp(z)"), 0.5, 1);
    EXPECT_TRUE(j.has(1));
    EXPECT_FALSE(j.has(2));
    EXPECT_EQ(j.d2(), cx(0.0));
    EXPECT_THROW(eval_jet(parse("z"), 0.0, 4), InvalidArgument);
}

TEST(EvalJet, ErrorsNameTheSubexpression) {
    try {
        eval_jet(parse("1 + 1/(z - 0.5)"), 0.5);
        FAIL();
    } catch (const EvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("z - 0.5"), std::string::npos) << e.what();
    }
    EXPECT_THROW(eval_jet(parse("log(z)"), 0.0), EvaluationError);
}

TEST(EvalJet, PrincipalBranches) {
    EXPECT_NEAR(std::abs(parse("sqrt(z)")(-1.0) - cx(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(parse("log(z)")(-1.0) - cx(0.0, pi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(parse("z^0.5")(-4.0) - cx(0.0, 2.0)), 0.0, 1e-15);
}

// Cauchy integral oracle: f^(k)(z0) = k!/(2 pi i) * contour integral of f/(z-z0)^(k+1),
// by the trapezoidal rule on a small circle, which converges geometrically.
static cx cauchy_derivative(const FunctionExpr& f, cx z0, int k, double rho = 0.05, int n = 64) {
    cx sum{};
    for (int j = 0; j < n; ++j) {
        const cx e = std::polar(1.0, 2.0 * pi * j / n);
        sum += f(z0 + rho * e) / std::pow(rho * e, k);
    }
    double fact = 1.0;
    for (int q = 2; q <= k; ++q) fact *= q;
    return fact * sum / static_cast<double>(n);
}

TEST(EvalJet, MatchesCauchyIntegralOracle) {
    Rng rng(11);
    for (const char* src : {"z/(1 - z^2/2)", "-log(1 - z)", "z*exp(z)", "z/(1-z)^2", "sin(z)*cos(2*z)",
                            "sqrt(1 + z)", "(1+z)^(0.5+0.25*i)"}) {
        const FunctionExpr f = parse(src);
        for (int s = 0; s < 20; ++s) {
            const cx z = rng.in_disk(0.7);
            const Jet3 j = eval_jet(f, z);
            for (int k = 1; k <= 3; ++k) {
                const cx ref = cauchy_derivative(f, z, k);
                EXPECT_LT(std::abs(j.d[k] - ref) / std::max(1.0, std::abs(ref)), 1e-9) << src << " k=" << k;
            }
        }
    }
}

// ---------------------------------------------------------------- generators

namespace {

NodePtr random_tree(Rng& rng, int depth) {
    if (depth == 0 || rng.integer(0, 3) == 0) {
        switch (rng.integer(0, 4)) {
            case 0: return make::imag_unit();
            case 1: return make::pi();
            case 2: return make::number(rng.integer(1, 9) / 4.0);
            default: return make::var();
        }
    }
    switch (rng.integer(0, 8)) {
        case 0: return make::neg(random_tree(rng, depth - 1));
        case 1: return make::binary(K::add, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 2: return make::binary(K::sub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 3: return make::binary(K::mul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 4: {
            // keep denominators away from zero on |z| <= 0.8
            auto den = make::binary(K::add, make::number(2.5), make::call(Builtin::sin, random_tree(rng, 0)));
            return make::binary(K::div, random_tree(rng, depth - 1), den);
        }
        case 5: return make::pow(random_tree(rng, depth - 1), make::number(rng.integer(0, 3)));
        case 6: return make::call(Builtin::exp, make::binary(K::mul, make::number(0.5), random_tree(rng, depth - 1)));
        case 7: return make::call(Builtin::sin, random_tree(rng, depth - 1));
        default: return make::call(Builtin::cos, random_tree(rng, depth - 1));
    }
}

}  // namespace

TEST(Property, PrintParseRoundTrip) {
    Rng rng(3);
    for (int n = 0; n < 500; ++n) {
        const NodePtr tree = random_tree(rng, 5);
        const std::string text = print(*tree);
        const FunctionExpr back = parse(text);
        EXPECT_TRUE(structurally_equal(back.root(), *tree)) << text << " reprinted as " << print(back);
    }
    // a few hand-written sources with awkward precedence
    for (const char* src : {"-z^2", "(-z)^2", "z^(-1)", "1/(z*2)", "(1-z)-(2-z)", "2^3^2", "-(-z)",
                            "z^(1/3)", "0.1*z", "1e-07*z", "exp(-z)*i"}) {
        const FunctionExpr f = parse(src);
        EXPECT_EQ(parse(print(f)), f) << src << " -> " << print(f);
    }
}

TEST(Property, JetFirstDerivativeMatchesCentralDifference) {
    Rng rng(5);
    int checked = 0;
    for (int n = 0; n < 300; ++n) {
        const FunctionExpr f = from_tree(random_tree(rng, 4));
        const cx z = rng.in_disk(0.8);
        try {
            const Jet3 j = eval_jet(f, z, 1);
            const double h = 1e-5;
            const cx fd = (f(z + h) - f(z - h)) / (2.0 * h);
            EXPECT_LT(std::abs(j.d1() - fd) / std::max(1.0, std::abs(j.d1())), 1e-6) << print(f) << " at " << to_string(z);
            ++checked;
        } catch (const EvaluationError&) {
        }
    }
    EXPECT_GT(checked, 250);
}

TEST(Property, Deterministic) {
    const FunctionExpr f = parse("exp(z)*sin(z)/(2 - z)^(1.5+0.5*i)");
    for (int n = 0; n < 10; ++n) {
        const Jet3 a = eval_jet(f, {0.3, 0.1});
        const Jet3 b = eval_jet(f, {0.3, 0.1});
        for (int k = 0; k <= 3; ++k) EXPECT_EQ(a.d[k], b.d[k]);
    }
}

TEST(ClassA, Examples) {
    EXPECT_TRUE(class_a_check(parse("z")).is_class_a);
    const ClassAReport shifted = class_a_check(parse("z+5"));
    EXPECT_FALSE(shifted.is_class_a);
    EXPECT_EQ(shifted.f_at_0, cx(5.0));
    const ClassAReport doubled = class_a_check(parse("2*z"));
    EXPECT_FALSE(doubled.is_class_a);
    EXPECT_EQ(doubled.fprime_at_0, cx(2.0));
    EXPECT_TRUE(class_a_check(parse("z/(1 - z^2/2)")).is_class_a);
    EXPECT_TRUE(class_a_check(parse("exp(z) - 1")).is_class_a);
}
