#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace lfract {

// Expression language for test functions of one variable x with the two
// symbolic parameters 'a' (the fractal exponent) and 's' (the convexity
// order).  Parameters may only appear inside exponents.
//
//   expr   := term (('+'|'-') term)*
//   term   := unary ('*' unary)*
//   unary  := ['-'] factor
//   factor := atom ['^' exponent]
//   atom   := 'x' | number | '(' expr ')' | 'abs' '(' expr ')'
//   exponent   := '(' param_expr ')' | number | 'a' | 's'
//   param_expr := arithmetic over numbers, 'a', 's' with + - * /
enum class ExprKind {
    Variable, // x
    Number,
    Alpha, // parameter a
    SParam, // parameter s
    Add,
    Sub,
    Mul,
    Div, // parameter expressions only
    Pow, // rhs is the exponent (x-free by construction)
    Neg,
    Abs,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double number = 0.0;
    ExprPtr lhs;
    ExprPtr rhs;
};

ExprPtr parse_expression(std::string_view text);

// Canonical fully parenthesized form; re-parsing yields a structurally
// identical tree.
std::string print_expression(const ExprPtr& e);

double eval_expression(const ExprPtr& e, double x, double alpha, double s);

bool expr_contains_x(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

} // namespace lfract
