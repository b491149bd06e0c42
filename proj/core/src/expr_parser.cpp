// Recursive-descent parser for regressor expressions.

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "dyncomp/errors.hpp"
#include "dyncomp/expr.hpp"

namespace dyncomp::expr {

namespace {

class Parser {
 public:
  Parser(std::string_view src, int num_vars) : src_(src), num_vars_(num_vars) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Op::neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    if (!accept('^')) return base;
    const std::size_t exponent_pos = pos_;
    const Expr exponent = parse_unary();
    if (exponent.max_variable() != 0) {
      throw ParseError("exponent must be an integer constant", exponent_pos);
    }
    const double value = eval(exponent, {});
    if (!std::isfinite(value) || value != std::trunc(value) || std::abs(value) > 1e6) {
      throw ParseError("non-integer exponent", exponent_pos);
    }
    return Expr::power(base, static_cast<int>(value));
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
    if (ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    if (pos_ == start) fail("malformed number");
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name == "sin" || name == "cos" || name == "exp") {
      const Op op = name == "sin" ? Op::sin : name == "cos" ? Op::cos : Op::exp;
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return Expr::unary(op, std::move(arg));
    }
    if (name.size() >= 2 && name[0] == 'x') {
      int index = 0;
      const auto digits = name.substr(1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (ec == std::errc() && ptr == digits.data() + digits.size()) {
        if (index < 1 || index > num_vars_) {
          throw ParseError("reference to undeclared variable '" + std::string(name) +
                               "' (declared x1..x" + std::to_string(num_vars_) + ")",
                           start);
        }
        return Expr::variable(index);
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  int num_vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, int num_vars) {
  return Parser(source, num_vars).parse_all();
}

}  // namespace dyncomp::expr
