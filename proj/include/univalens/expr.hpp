#pragma once

// Expression language for analytic functions of z.
//
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := "-" factor | power
//   power  := base ("^" factor)?
//   base   := number | "z" | "i" | "pi" | "(" expr ")" | ident "(" expr ")"
//   ident  := exp | log | sqrt | sin | cos
//
// "^" binds tighter than unary minus (-z^2 is -(z^2)) and is right
// associative. Exponents must not depend on z. Whitespace is ignored.

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "univalens/complex.hpp"
#include "univalens/error.hpp"
#include "univalens/jet.hpp"

namespace univalens::expr {

enum class Builtin { exp, log, sqrt, sin, cos };

inline std::string_view name(Builtin b) {
    switch (b) {
        case Builtin::exp: return "exp";
        case Builtin::log: return "log";
        case Builtin::sqrt: return "sqrt";
        case Builtin::sin: return "sin";
        case Builtin::cos: return "cos";
    }
    return "?";
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { number, imag_unit, pi, var, neg, add, sub, mul, div, pow, call };

    Kind kind = Kind::number;
    double number = 0.0;            // Kind::number
    Builtin fn = Builtin::exp;      // Kind::call
    NodePtr lhs;                    // operand of neg/call, left of binary ops
    NodePtr rhs;                    // right of binary ops; exponent of pow
    cx exponent{};                  // folded value of rhs for Kind::pow

    bool depends_on_z() const {
        if (kind == Kind::var) return true;
        return (lhs && lhs->depends_on_z()) || (rhs && rhs->depends_on_z());
    }
};

inline bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Node::Kind::number && a.number != b.number) return false;
    if (a.kind == Node::Kind::call && a.fn != b.fn) return false;
    auto same = [](const NodePtr& x, const NodePtr& y) {
        if (!x || !y) return !x && !y;
        return structurally_equal(*x, *y);
    };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

// ---------------------------------------------------------------- builders

namespace make {

inline NodePtr number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    n->number = v;
    return n;
}
inline NodePtr leaf(Node::Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}
inline NodePtr var() { return leaf(Node::Kind::var); }
inline NodePtr imag_unit() { return leaf(Node::Kind::imag_unit); }
inline NodePtr pi() { return leaf(Node::Kind::pi); }
inline NodePtr unary(Node::Kind k, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    return n;
}
inline NodePtr neg(NodePtr a) { return unary(Node::Kind::neg, std::move(a)); }
inline NodePtr call(Builtin fn, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::call;
    n->fn = fn;
    n->lhs = std::move(a);
    return n;
}
inline NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}
inline NodePtr pow(NodePtr base, NodePtr exponent);  // folds the exponent, below

}  // namespace make

// ---------------------------------------------------------------- evaluation

template <std::size_t N>
Jet<N> eval_node(const Node& n, const Jet<N>& z);

inline std::string print(const Node& n);

namespace detail {

[[noreturn]] inline void fail(const Node& n, const std::string& what) {
    throw EvaluationError(what + " in subexpression '" + print(n) + "'");
}

}  // namespace detail

template <std::size_t N>
Jet<N> eval_node(const Node& n, const Jet<N>& z) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::number: return Jet<N>::constant(n.number);
        case K::imag_unit: return Jet<N>::constant(cx{0.0, 1.0});
        case K::pi: return Jet<N>::constant(univalens::pi);
        case K::var: return z;
        case K::neg: return -eval_node(*n.lhs, z);
        case K::add: return eval_node(*n.lhs, z) + eval_node(*n.rhs, z);
        case K::sub: return eval_node(*n.lhs, z) - eval_node(*n.rhs, z);
        case K::mul: return eval_node(*n.lhs, z) * eval_node(*n.rhs, z);
        case K::div: {
            const auto den = eval_node(*n.rhs, z);
            if (std::abs(den.c[0]) < 1e-300) detail::fail(n, "division by ~0");
            return eval_node(*n.lhs, z) / den;
        }
        case K::pow: {
            const auto base = eval_node(*n.lhs, z);
            try {
                return pow(base, n.exponent);
            } catch (const EvaluationError&) {
                detail::fail(n, "power of zero with non-integer exponent");
            }
        }
        case K::call: {
            const auto arg = eval_node(*n.lhs, z);
            switch (n.fn) {
                case Builtin::exp: return exp(arg);
                case Builtin::log:
                    if (arg.c[0] == cx{}) detail::fail(n, "log of 0");
                    return log(arg);
                case Builtin::sqrt:
                    if (arg.c[0] == cx{} && !arg.is_constant())
                        detail::fail(n, "sqrt of 0 is not differentiable");
                    return sqrt(arg);
                case Builtin::sin: return sin(arg);
                case Builtin::cos: return cos(arg);
            }
        }
    }
    detail::fail(n, "unknown node");
}

namespace make {

inline NodePtr pow(NodePtr base, NodePtr exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::pow;
    n->exponent = eval_node(*exponent, Jet<0>::constant(0.0)).value();
    n->lhs = std::move(base);
    n->rhs = std::move(exponent);
    return n;
}

}  // namespace make

// ---------------------------------------------------------------- printing

namespace detail {

inline int precedence(const Node& n) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::add:
        case K::sub: return 1;
        case K::mul:
        case K::div: return 2;
        case K::neg: return 3;
        case K::pow: return 4;
        default: return 5;
    }
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void print_to(const Node& n, std::string& out);

inline void print_child(const Node& n, bool parens, std::string& out) {
    if (parens) out += '(';
    print_to(n, out);
    if (parens) out += ')';
}

inline void print_to(const Node& n, std::string& out) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::number: out += format_number(n.number); return;
        case K::imag_unit: out += 'i'; return;
        case K::pi: out += "pi"; return;
        case K::var: out += 'z'; return;
        case K::neg:
            out += '-';
            print_child(*n.lhs, precedence(*n.lhs) < 3, out);
            return;
        case K::call:
            out += name(n.fn);
            print_child(*n.lhs, true, out);
            return;
        case K::pow:
            print_child(*n.lhs, precedence(*n.lhs) < 5, out);
            out += '^';
            print_child(*n.rhs, precedence(*n.rhs) < 3, out);
            return;
        default: break;
    }
    const int p = precedence(n);
    const char* op = n.kind == K::add ? " + " : n.kind == K::sub ? " - " : n.kind == K::mul ? "*" : "/";
    print_child(*n.lhs, precedence(*n.lhs) < p, out);
    out += op;
    print_child(*n.rhs, precedence(*n.rhs) <= p, out);
}

}  // namespace detail

/// Canonical text of an expression tree; parse(print(t)) reproduces t.
inline std::string print(const Node& n) {
    std::string out;
    detail::print_to(n, out);
    return out;
}

// ---------------------------------------------------------------- parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        auto root = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) fail({"operator", "end of input"});
        return root;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                      src_[pos_] == '\r'))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_ws();
        std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
        throw SyntaxError(pos_ + 1, std::move(expected), found);
    }

    void expect(char c) {
        if (peek() != c) fail({std::string("'") + c + "'"});
        ++pos_;
    }

    NodePtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            const char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            auto rhs = parse_term();
            lhs = make::binary(c == '+' ? Node::Kind::add : Node::Kind::sub, std::move(lhs), std::move(rhs));
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_factor();
        for (;;) {
            const char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            auto rhs = parse_factor();
            lhs = make::binary(c == '*' ? Node::Kind::mul : Node::Kind::div, std::move(lhs), std::move(rhs));
        }
    }

    NodePtr parse_factor() {
        if (peek() == '-') {
            ++pos_;
            return make::neg(parse_factor());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_base();
        if (peek() != '^') return base;
        ++pos_;
        const std::size_t exp_pos = pos_;
        auto exponent = parse_factor();
        if (exponent->depends_on_z()) {
            pos_ = exp_pos;
            fail({"constant exponent"});
        }
        try {
            return make::pow(std::move(base), std::move(exponent));
        } catch (const EvaluationError&) {
            pos_ = exp_pos;
            fail({"finite constant exponent"});
        }
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ == start + 1 && src_[start] == '.') {
            pos_ = start;
            fail({"number"});
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && is_digit(src_[p])) {
                while (p < src_.size() && is_digit(src_[p])) ++p;
                pos_ = p;
            } else {
                pos_ = p;
                fail({"exponent digits"});
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc{} || !std::isfinite(v)) {
            pos_ = start;
            fail({"finite number"});
        }
        return make::number(v);
    }

    NodePtr parse_base() {
        const char c = peek();
        if (is_digit(c) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            auto inner = parse_expr();
            expect(')');
            return inner;
        }
        if (is_alpha(c)) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == "z") return make::var();
            if (id == "i") return make::imag_unit();
            if (id == "pi") return make::pi();
            static constexpr std::array<Builtin, 5> builtins{Builtin::exp, Builtin::log, Builtin::sqrt,
                                                             Builtin::sin, Builtin::cos};
            for (Builtin b : builtins) {
                if (id == name(b)) {
                    expect('(');
                    auto arg = parse_expr();
                    expect(')');
                    return make::call(b, std::move(arg));
                }
            }
            throw UnknownIdentifier(start + 1, std::string(id));
        }
        fail({"number", "'z'", "'i'", "'pi'", "'('", "function name", "'-'"});
    }
};

}  // namespace detail

/// A parsed analytic function of z, together with its source text.
class FunctionExpr {
public:
    FunctionExpr() : root_(make::var()), source_("z") {}
    FunctionExpr(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {}

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    const std::string& source() const { return source_; }

    template <std::size_t N>
    Jet<N> jet(cx z) const {
        return eval_node(*root_, Jet<N>::variable(z));
    }

    cx operator()(cx z) const { return jet<0>(z).value(); }

    friend bool operator==(const FunctionExpr& a, const FunctionExpr& b) {
        return structurally_equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
    std::string source_;
};

inline FunctionExpr parse(std::string_view source) {
    detail::Parser p(source);
    return FunctionExpr(p.parse_all(), std::string(source));
}

inline FunctionExpr from_tree(NodePtr root) {
    std::string text = print(*root);
    return FunctionExpr(std::move(root), std::move(text));
}

inline std::string print(const FunctionExpr& fn) { return print(fn.root()); }

/// Value and derivatives of order 1..3 at a point. Entries d[k] with
/// k > order were not computed and are zero.
struct Jet3 {
    std::array<cx, 4> d{};
    int order = 3;

    cx d0() const { return d[0]; }
    cx d1() const { return d[1]; }
    cx d2() const { return d[2]; }
    cx d3() const { return d[3]; }
    bool has(int k) const { return k <= order; }
};

inline Jet3 eval_jet(const FunctionExpr& fn, cx z, int order = 3) {
    if (order < 0 || order > 3) throw InvalidArgument("eval_jet: order must be in 0..3");
    Jet3 out;
    out.order = order;
    auto fill = [&](const auto& j) {
        for (std::size_t k = 0; k <= std::remove_cvref_t<decltype(j)>::order; ++k) out.d[k] = j.derivative(k);
    };
    switch (order) {
        case 0: fill(fn.jet<0>(z)); break;
        case 1: fill(fn.jet<1>(z)); break;
        case 2: fill(fn.jet<2>(z)); break;
        default: fill(fn.jet<3>(z)); break;
    }
    return out;
}

struct ClassAReport {
    bool is_class_a = false;
    cx f_at_0{};
    cx fprime_at_0{};
};

/// Normalization f(0) = 0, f'(0) = 1 to within 1e-10.
inline ClassAReport class_a_check(const FunctionExpr& fn) {
    constexpr double tol = 1e-10;
    const auto j = fn.jet<1>(cx{});
    ClassAReport r;
    r.f_at_0 = j.c[0];
    r.fprime_at_0 = j.c[1];
    r.is_class_a = std::abs(r.f_at_0) <= tol && std::abs(r.fprime_at_0 - 1.0) <= tol;
    return r;
}

}  // namespace univalens::expr
