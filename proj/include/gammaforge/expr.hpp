#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gammaforge/jet.hpp"

namespace gammaforge {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable syntax tree of a coefficient expression.
///
///   expr    := term (("+"|"-") term)*
///   term    := factor (("*"|"/") factor)*
///   factor  := "-" factor | power
///   power   := atom ("^" factor)?
///   atom    := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
///   ident   := "x1".."x9" | "sin"|"cos"|"exp"|"log"|"sqrt"|"tanh"
struct Expr {
  enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind;
  double constant = 0.0;   // Constant
  int variable = 0;        // Variable, 0-based
  std::string function;    // Call
  std::vector<ExprPtr> children;

  static ExprPtr make_constant(double v);
  static ExprPtr make_variable(int index);
  static ExprPtr make_unary(Kind kind, ExprPtr a);
  static ExprPtr make_binary(Kind kind, ExprPtr a, ExprPtr b);
  static ExprPtr make_call(std::string name, ExprPtr arg);
};

/// Parses `source` for a chart of dimension `dim`. Throws ParseError with the
/// byte offset on syntax errors, unknown identifiers, or x_i with i > dim.
ExprPtr parse_expr(std::string_view source, int dim);

/// Plain evaluation at a point.
double evaluate(const Expr& e, std::span<const double> x);

/// Exact jet of the expression at `x` to `order`.
Jet eval_jet(const Expr& e, std::span<const double> x, int order);

/// Fully parenthesized source text that reparses to an equivalent tree.
std::string to_source(const Expr& e);

/// Structural S-expression, e.g. "div(1, pow(x2, 2))".
std::string describe(const Expr& e);

/// True when the subtree contains no variables.
bool is_constant(const Expr& e);

}  // namespace gammaforge
