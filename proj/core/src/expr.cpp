#include "dyncomp/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dyncomp/errors.hpp"

namespace dyncomp::expr {

struct Expr::Node {
  Op op = Op::constant;
  double value = 0.0;
  int index = 0;  // variable index or pow exponent
  int max_var = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

bool is_unary(Op op) {
  return op == Op::neg || op == Op::sin || op == Op::cos || op == Op::exp;
}

bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div;
}

}  // namespace

Expr::Expr() : node_(std::make_shared<Node>()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->index = index;
  n->max_var = index;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand) {
  if (!is_unary(op)) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->max_var = operand.max_variable();
  n->a = std::move(operand.node_);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->max_var = std::max(lhs.max_variable(), rhs.max_variable());
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->index = exponent;
  n->max_var = base.max_variable();
  n->a = std::move(base.node_);
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
int Expr::variable_index() const noexcept { return node_->index; }
int Expr::exponent() const noexcept { return node_->index; }
Expr Expr::operand() const { return Expr(node_->a); }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
int Expr::max_variable() const noexcept { return node_->max_var; }

bool operator==(const Expr& x, const Expr& y) {
  if (x.node_ == y.node_) return true;
  if (x.op() != y.op()) return false;
  switch (x.op()) {
    case Op::constant:
      return x.value() == y.value();
    case Op::variable:
      return x.variable_index() == y.variable_index();
    case Op::pow:
      return x.exponent() == y.exponent() && x.operand() == y.operand();
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::exp:
      return x.operand() == y.operand();
    default:
      return x.lhs() == y.lhs() && x.rhs() == y.rhs();
  }
}

// ---------------------------------------------------------------- printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return kPrecAdd;
    case Op::mul:
    case Op::div:
      return kPrecMul;
    case Op::neg:
      return kPrecNeg;
    case Op::pow:
      return kPrecPow;
    case Op::constant:
      return std::signbit(e.value()) ? kPrecNeg : kPrecAtom;
    default:
      return kPrecAtom;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf.data(), end);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  print(e, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::constant:
      // Negative literals carry neg precedence; callers add parens.
      out += format_number(e.value());
      return;
    case Op::variable:
      out += 'x';
      out += std::to_string(e.variable_index());
      return;
    case Op::neg:
      out += '-';
      print_wrapped(e.operand(), precedence(e.operand()) < kPrecNeg, out);
      return;
    case Op::sin:
    case Op::cos:
    case Op::exp:
      out += e.op() == Op::sin ? "sin(" : e.op() == Op::cos ? "cos(" : "exp(";
      print(e.operand(), out);
      out += ')';
      return;
    case Op::pow:
      print_wrapped(e.operand(), precedence(e.operand()) < kPrecAtom, out);
      out += '^';
      if (e.exponent() < 0) {
        out += "(" + std::to_string(e.exponent()) + ")";
      } else {
        out += std::to_string(e.exponent());
      }
      return;
    default: {
      const int p = precedence(e);
      print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
      switch (e.op()) {
        case Op::add: out += '+'; break;
        case Op::sub: out += '-'; break;
        case Op::mul: out += '*'; break;
        default: out += '/'; break;
      }
      // Left-associative: an equal-precedence right operand keeps its parens.
      print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// -------------------------------------------------------------- evaluation

namespace {

double eval_node(const Expr& e, std::span<const double> x) {
  switch (e.op()) {
    case Op::constant:
      return e.value();
    case Op::variable:
      if (static_cast<std::size_t>(e.variable_index()) > x.size()) {
        throw EvalError("variable x" + std::to_string(e.variable_index()) +
                        " not bound (state has " + std::to_string(x.size()) +
                        " entries)");
      }
      return x[static_cast<std::size_t>(e.variable_index() - 1)];
    case Op::neg:
      return -eval_node(e.operand(), x);
    case Op::sin:
      return std::sin(eval_node(e.operand(), x));
    case Op::cos:
      return std::cos(eval_node(e.operand(), x));
    case Op::exp:
      return std::exp(eval_node(e.operand(), x));
    case Op::pow: {
      const double base = eval_node(e.operand(), x);
      if (e.exponent() < 0 && base == 0.0) {
        throw EvalError("division by zero in '" + to_string(e) + "'");
      }
      return std::pow(base, e.exponent());
    }
    case Op::add:
      return eval_node(e.lhs(), x) + eval_node(e.rhs(), x);
    case Op::sub:
      return eval_node(e.lhs(), x) - eval_node(e.rhs(), x);
    case Op::mul:
      return eval_node(e.lhs(), x) * eval_node(e.rhs(), x);
    case Op::div: {
      const double num = eval_node(e.lhs(), x);
      const double den = eval_node(e.rhs(), x);
      if (den == 0.0) {
        throw EvalError("division by zero in '" + to_string(e) + "'");
      }
      return num / den;
    }
  }
  return 0.0;
}

}  // namespace

double eval(const Expr& e, std::span<const double> x) { return eval_node(e, x); }

// ---------------------------------------------------------- differentiation

namespace {

const Expr& zero() {
  static const Expr z = Expr::constant(0.0);
  return z;
}

const Expr& one() {
  static const Expr o = Expr::constant(1.0);
  return o;
}

Expr s_neg(const Expr& a) {
  if (a.is_constant(0.0)) return zero();
  return Expr::unary(Op::neg, a);
}

Expr s_add(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(Op::add, a, b);
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return s_neg(b);
  return Expr::binary(Op::sub, a, b);
}

Expr s_mul(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return zero();
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Op::mul, a, b);
}

Expr s_div(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return zero();
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Op::div, a, b);
}

Expr s_pow(const Expr& base, int n) {
  if (n == 0) return one();
  if (n == 1) return base;
  return Expr::power(base, n);
}

}  // namespace

Expr diff(const Expr& e, int var) {
  if (var < 1) throw std::invalid_argument("variable index must be >= 1");
  // Every index in the subtree is <= max_variable.
  if (e.max_variable() < var) return zero();
  switch (e.op()) {
    case Op::constant:
      return zero();
    case Op::variable:
      return e.variable_index() == var ? one() : zero();
    case Op::neg:
      return s_neg(diff(e.operand(), var));
    case Op::sin:
      return s_mul(Expr::unary(Op::cos, e.operand()), diff(e.operand(), var));
    case Op::cos:
      return s_mul(s_neg(Expr::unary(Op::sin, e.operand())),
                   diff(e.operand(), var));
    case Op::exp:
      return s_mul(e, diff(e.operand(), var));
    case Op::add:
      return s_add(diff(e.lhs(), var), diff(e.rhs(), var));
    case Op::sub:
      return s_sub(diff(e.lhs(), var), diff(e.rhs(), var));
    case Op::mul:
      return s_add(s_mul(diff(e.lhs(), var), e.rhs()),
                   s_mul(e.lhs(), diff(e.rhs(), var)));
    case Op::div: {
      const Expr du = diff(e.lhs(), var);
      const Expr dv = diff(e.rhs(), var);
      return s_div(s_sub(s_mul(du, e.rhs()), s_mul(e.lhs(), dv)),
                   s_pow(e.rhs(), 2));
    }
    case Op::pow: {
      const int n = e.exponent();
      if (n == 0) return zero();
      const Expr inner = diff(e.operand(), var);
      return s_mul(s_mul(Expr::constant(static_cast<double>(n)),
                         s_pow(e.operand(), n - 1)),
                   inner);
    }
  }
  return zero();
}

}  // namespace dyncomp::expr
