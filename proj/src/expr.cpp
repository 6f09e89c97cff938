#include "finsler/expr.hpp"

#include "finsler/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace finsler::expr {

NodePtr literal(double v) { return std::make_shared<Node>(Node{Kind::literal, v, Fn::exp, nullptr, nullptr}); }
NodePtr variable() { return std::make_shared<Node>(Node{Kind::variable, 0.0, Fn::exp, nullptr, nullptr}); }
NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    return std::make_shared<Node>(Node{k, 0.0, Fn::exp, std::move(a), std::move(b)});
}
NodePtr negate(NodePtr a) { return std::make_shared<Node>(Node{Kind::neg, 0.0, Fn::exp, std::move(a), nullptr}); }
NodePtr call(Fn f, NodePtr a) { return std::make_shared<Node>(Node{Kind::call, 0.0, f, std::move(a), nullptr}); }

namespace {

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::exp: return "exp";
        case Fn::ln: return "ln";
        case Fn::sqrt: return "sqrt";
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
    }
    return "?";
}

const std::vector<std::string> kAtomStart{"number", "x1", "exp", "ln", "sqrt", "sin", "cos", "(", "-"};

class Parser {
public:
    explicit Parser(std::string_view s) : src_(s) {}

    NodePtr run() {
        skip();
        if (pos_ == src_.size()) fail("empty expression", kAtomStart);
        NodePtr e = expr();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'", {"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
        std::string msg = "syntax error at offset " + std::to_string(pos_ + 1) + ": " + what + "; expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + ("'" + expected[i] + "'");
        throw ParseError(msg, pos_ + 1, std::move(expected));
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+')) e = binary(Kind::add, e, term());
            else if (eat('-')) e = binary(Kind::sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*')) e = binary(Kind::mul, e, unary());
            else if (eat('/')) e = binary(Kind::div, e, unary());
            else return e;
        }
    }

    NodePtr unary() {
        if (eat('-')) return negate(unary());
        NodePtr base = atom();
        if (eat('^')) return binary(Kind::pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ == src_.size()) fail("unexpected end of input", kAtomStart);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail(pos_ == src_.size() ? "unexpected end of input" : "unbalanced parenthesis", {")"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == "x1") return variable();
            for (Fn f : {Fn::exp, Fn::ln, Fn::sqrt, Fn::sin, Fn::cos}) {
                if (id != fn_name(f)) continue;
                if (!eat('(')) fail("expected '(' after " + std::string(id), {"("});
                NodePtr arg = expr();
                if (!eat(')')) fail(pos_ == src_.size() ? "unexpected end of input" : "unbalanced parenthesis", {")"});
                return call(f, arg);
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(id) + "'", {"x1", "exp", "ln", "sqrt", "sin", "cos"});
        }
        fail("unexpected '" + std::string(1, c) + "'", kAtomStart);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) digits();
            else pos_ = save;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc() || ptr != src_.data() + pos_) {
            pos_ = start;
            fail("malformed number", {"number"});
        }
        return literal(v);
    }
};

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::add:
        case Kind::sub: return 1;
        case Kind::mul:
        case Kind::div: return 2;
        case Kind::neg: return 3;
        case Kind::pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string wrap(const NodePtr& e, bool parens) { return parens ? "(" + pretty(e) + ")" : pretty(e); }

bool is_integer(double v) { return std::abs(v) <= 64 && v == std::round(v); }

bool constant(const Node& n) {
    if (n.kind == Kind::variable) return false;
    if (n.lhs && !constant(*n.lhs)) return false;
    if (n.rhs && !constant(*n.rhs)) return false;
    return true;
}

template <class T>
T power(const T& base, const Node& exponent, const T& x1, auto eval) {
    if (constant(exponent)) {
        const double k = evaluate(std::make_shared<Node>(exponent), 0.0);
        if (is_integer(k)) {
            T acc = base * 0.0 + 1.0;
            for (int i = 0; i < static_cast<int>(std::abs(k)); ++i) acc = acc * base;
            return k < 0 ? 1.0 / acc : acc;
        }
        if constexpr (std::is_same_v<T, double>) return std::pow(base, k);
        else return jet::pow(base, k);
    }
    if constexpr (std::is_same_v<T, double>) return std::exp(eval(exponent, x1) * std::log(base));
    else return jet::exp(eval(exponent, x1) * jet::log(base));
}

template <class T>
T eval_node(const Node& n, const T& x1) {
    auto rec = [](const Node& m, const T& x) { return eval_node<T>(m, x); };
    switch (n.kind) {
        case Kind::literal: return x1 * 0.0 + n.value;
        case Kind::variable: return x1;
        case Kind::add: return eval_node(*n.lhs, x1) + eval_node(*n.rhs, x1);
        case Kind::sub: return eval_node(*n.lhs, x1) - eval_node(*n.rhs, x1);
        case Kind::mul: return eval_node(*n.lhs, x1) * eval_node(*n.rhs, x1);
        case Kind::div: {
            const T d = eval_node(*n.rhs, x1);
            if constexpr (std::is_same_v<T, double>)
                if (std::abs(d) <= jet::kSingularTolerance) throw SingularPoint("division by zero in f", d);
            return eval_node(*n.lhs, x1) / d;
        }
        case Kind::pow: return power<T>(eval_node(*n.lhs, x1), *n.rhs, x1, rec);
        case Kind::neg: return -1.0 * eval_node(*n.lhs, x1);
        case Kind::call: {
            const T a = eval_node(*n.lhs, x1);
            if constexpr (std::is_same_v<T, double>) {
                switch (n.fn) {
                    case Fn::exp: return std::exp(a);
                    case Fn::ln:
                        if (!(a > 0)) throw SingularPoint("ln argument outside the real domain", a);
                        return std::log(a);
                    case Fn::sqrt:
                        if (!(a >= 0)) throw SingularPoint("sqrt argument outside the real domain", a);
                        return std::sqrt(a);
                    case Fn::sin: return std::sin(a);
                    case Fn::cos: return std::cos(a);
                }
            } else {
                switch (n.fn) {
                    case Fn::exp: return jet::exp(a);
                    case Fn::ln: return jet::log(a);
                    case Fn::sqrt: return jet::sqrt(a);
                    case Fn::sin: return jet::sin(a);
                    case Fn::cos: return jet::cos(a);
                }
            }
        }
    }
    throw Error("malformed expression");
}

}  // namespace

NodePtr parse(std::string_view src) { return Parser(src).run(); }

std::string pretty(const NodePtr& e) {
    const Node& n = *e;
    const int p = precedence(n);
    switch (n.kind) {
        case Kind::literal: return format_number(n.value);
        case Kind::variable: return "x1";
        case Kind::call: return std::string(fn_name(n.fn)) + "(" + pretty(n.lhs) + ")";
        case Kind::neg: return "-" + wrap(n.lhs, precedence(*n.lhs) < 3);
        case Kind::pow: return wrap(n.lhs, precedence(*n.lhs) <= 4) + "^" + wrap(n.rhs, precedence(*n.rhs) < 3);
        default: {
            const char* op = n.kind == Kind::add ? " + " : n.kind == Kind::sub ? " - " : n.kind == Kind::mul ? " * " : " / ";
            return wrap(n.lhs, precedence(*n.lhs) < p) + op + wrap(n.rhs, precedence(*n.rhs) <= p);
        }
    }
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    if (a->kind == Kind::literal) return a->value == b->value;
    if (a->kind == Kind::call && a->fn != b->fn) return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::string tree(const NodePtr& e) {
    const Node& n = *e;
    switch (n.kind) {
        case Kind::literal: return "Lit " + format_number(n.value);
        case Kind::variable: return "Var";
        case Kind::add: return "Add(" + tree(n.lhs) + ", " + tree(n.rhs) + ")";
        case Kind::sub: return "Sub(" + tree(n.lhs) + ", " + tree(n.rhs) + ")";
        case Kind::mul: return "Mul(" + tree(n.lhs) + ", " + tree(n.rhs) + ")";
        case Kind::div: return "Div(" + tree(n.lhs) + ", " + tree(n.rhs) + ")";
        case Kind::pow: return "Pow(" + tree(n.lhs) + ", " + tree(n.rhs) + ")";
        case Kind::neg: return "Neg(" + tree(n.lhs) + ")";
        case Kind::call: {
            std::string name = fn_name(n.fn);
            name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
            return name + "(" + tree(n.lhs) + ")";
        }
    }
    return "?";
}

Jet evaluate(const NodePtr& e, const Jet& x1) { return eval_node<Jet>(*e, x1); }
double evaluate(const NodePtr& e, double x1) { return eval_node<double>(*e, x1); }

alphabeta::UnivariateFn to_function(NodePtr e) {
    return [e = std::move(e)](const Jet& x1) { return evaluate(e, x1); };
}

}  // namespace finsler::expr
