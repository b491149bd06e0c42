#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace dyncomp::expr {

enum class Op : std::uint8_t {
  constant,
  variable,
  neg,
  sin,
  cos,
  exp,
  add,
  sub,
  mul,
  div,
  pow,
};

// Immutable expression tree over the state variables x1..xr of one agent.
//
// Nodes are shared between trees (derivatives reuse subtrees of their
// source), so copying an Expr is cheap and concurrent reads are safe.
// Variables are 1-based to match the textual form "x1", "x2", ...
class Expr {
 public:
  // The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr unary(Op op, Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);

  Op op() const noexcept;
  double value() const noexcept;       // constant
  int variable_index() const noexcept; // variable
  int exponent() const noexcept;       // pow
  Expr operand() const;  // unary ops and pow base
  Expr lhs() const;
  Expr rhs() const;

  // Largest variable index referenced anywhere in the tree, 0 if none.
  int max_variable() const noexcept;

  bool is_constant(double v) const noexcept {
    return op() == Op::constant && value() == v;
  }

  // Structural tree equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Parses `source` against the grammar
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x' index | fn '(' expr ')' | '(' expr ')'
//   fn      := 'sin' | 'cos' | 'exp'
//
// `num_vars` is the number of declared state variables; references to x0 or
// to x(num_vars+1) and beyond are rejected. Exponents must fold to an integer
// constant. Throws ParseError.
Expr parse(std::string_view source, int num_vars);

// Prints in the same grammar with the minimal parentheses needed so that
// parse(to_string(e)) reproduces e.
std::string to_string(const Expr& e);

// Evaluates with x[k-1] bound to variable xk. Throws EvalError on division
// by zero (naming the offending subexpression) or when x is too short.
double eval(const Expr& e, std::span<const double> x);

// Exact symbolic partial derivative with respect to variable `var`
// (1-based). Only 0/1 identities are simplified.
Expr diff(const Expr& e, int var);

}  // namespace dyncomp::expr
