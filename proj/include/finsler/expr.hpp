#pragma once

// Expressions in x1 for the warp function f(x1).
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          right-associative
//   atom   := number | 'x1' | fn '(' expr ')' | '(' expr ')'
//   fn     := 'exp' | 'ln' | 'sqrt' | 'sin' | 'cos'

#include "finsler/alphabeta.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace finsler::expr {

enum class Kind { literal, variable, add, sub, mul, div, pow, neg, call };
enum class Fn { exp, ln, sqrt, sin, cos };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Kind kind = Kind::literal;
    double value = 0.0;
    Fn fn = Fn::exp;
    NodePtr lhs;  // operand of neg and call
    NodePtr rhs;
};

NodePtr literal(double v);
NodePtr variable();
NodePtr binary(Kind k, NodePtr a, NodePtr b);
NodePtr negate(NodePtr a);
NodePtr call(Fn f, NodePtr a);

/// Throws ParseError; offsets are 1-based byte positions.
NodePtr parse(std::string_view src);
/// Minimal parentheses; parse(pretty(e)) is structurally equal to e.
std::string pretty(const NodePtr& e);
bool equal(const NodePtr& a, const NodePtr& b);
/// Debug form, e.g. Add(Lit 1, Div(Pow(Var, Lit 2), Lit 4)).
std::string tree(const NodePtr& e);

Jet evaluate(const NodePtr& e, const Jet& x1);
double evaluate(const NodePtr& e, double x1);
alphabeta::UnivariateFn to_function(NodePtr e);

}  // namespace finsler::expr
